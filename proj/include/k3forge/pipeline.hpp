#pragma once

// Resumable pipeline stages over a working directory. Each stage reads the
// artifacts of earlier stages and writes one artifact atomically; a stage
// whose artifact exists is skipped unless `force` is set. Outputs are sorted
// by polytope id, so they do not depend on the number of workers.

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adeclass.hpp"
#include "catalog.hpp"
#include "io.hpp"
#include "k3dual.hpp"
#include "parallel.hpp"
#include "triangulate.hpp"

namespace k3forge::pipeline {

namespace fs = std::filesystem;
using io::Json;

inline const std::vector<std::string>& stageNames() {
  static const std::vector<std::string> names{
      "enumerate-canonical", "filter-reflexive", "minimal", "triangulate",
      "k3-stats", "classify-singularities", "verdicts", "verify"};
  return names;
}

struct Paths {
  fs::path catalog, reflexive, minimal, triangulations, stats, singularities, verdicts;

  static Paths in(const fs::path& dir) {
    return {dir / "catalog.jsonl", dir / "reflexive.jsonl", dir / "minimal.jsonl",
            dir / "triangs.jsonl", dir / "k3stats.json", dir / "sing.jsonl",
            dir / "verdicts.jsonl"};
  }
};

struct PipelineConfig {
  std::vector<std::string> stages;
  int maxLatticePoints = 18;
  // Triangulations are enumerated only for volume (= K3 vertex count) up to
  // this bound; with 18 lattice points the full run reaches volume 30.
  int maxVertices = 18;
  int jobs = 1;
  std::uint64_t seed = 1;
  int seeds = kDefaultSeeds;
  bool force = false;
  Paths paths = Paths::in(".");
  std::ostream* log = &std::clog;

  void validate() const {
    if (maxLatticePoints < 5) throw Error("max-points must be at least 5");
    if (maxVertices < 4) throw Error("max-vertices must be at least 4");
    if (jobs < 1) throw Error("jobs must be at least 1");
    if (seeds < 1) throw Error("seeds must be at least 1");
    for (const auto& s : stages)
      if (std::find(stageNames().begin(), stageNames().end(), s) == stageNames().end())
        throw Error("unknown stage: " + s);
  }

  bool inRange(const CatalogEntry& e) const {
    return e.latticePointCount() <= maxLatticePoints && e.volume <= maxVertices;
  }
};

namespace detail {

inline bool upToDate(const PipelineConfig& c, const fs::path& out, const std::string& stage) {
  if (!c.force && fs::exists(out)) {
    *c.log << stage << ": " << out.string() << " exists, skipping\n";
    return true;
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  return false;
}

inline void writeEntries(const fs::path& path, std::span<const CatalogEntry> entries) {
  io::RecordWriter w(path);
  for (const auto& e : entries) w.write(io::catalogRecord(e));
  w.commit();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Catalog stages

inline void enumerateCanonicalStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.catalog, "enumerate-canonical")) return;
  Catalog cat = enumerateCanonical(c.jobs, [&](int points, std::size_t n) {
    *c.log << "enumerate-canonical: " << n << " polytopes with " << points << " lattice points\n";
  });
  detail::writeEntries(c.paths.catalog, cat.entries());
  *c.log << "enumerate-canonical: " << cat.size() << " entries\n";
}

inline void filterReflexiveStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.reflexive, "filter-reflexive")) return;
  Catalog cat = io::readCatalog(c.paths.catalog);
  auto reflexive = filterReflexive(cat);
  detail::writeEntries(c.paths.reflexive, reflexive);
  *c.log << "filter-reflexive: " << reflexive.size() << " entries\n";
}

/// Minimality needs the full catalog (the trim DAG runs through canonical,
/// non-reflexive polytopes); the output keeps reflexive entries only.
inline void minimalStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.minimal, "minimal")) return;
  Catalog cat = io::readCatalog(c.paths.catalog);
  markMinimal(cat, c.jobs);
  assignWitnesses(cat, c.jobs);
  auto reflexive = filterReflexive(cat);
  detail::writeEntries(c.paths.minimal, reflexive);
  auto minimal = std::count_if(reflexive.begin(), reflexive.end(),
                               [](const CatalogEntry& e) { return e.minimal.value_or(false); });
  *c.log << "minimal: " << minimal << " minimal among " << reflexive.size() << " reflexive\n";
}

// ---------------------------------------------------------------------------
// Triangulations

inline void triangulateStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.triangulations, "triangulate")) return;
  auto entries = io::readEntries(c.paths.reflexive);
  std::vector<const CatalogEntry*> todo;
  for (const auto& e : entries)
    if (e.reflexive && c.inRange(e)) todo.push_back(&e);

  std::vector<std::vector<io::TriangulationRecord>> perPolytope(todo.size());
  std::atomic<std::size_t> done{0};
  std::mutex logMutex;
  parallelFor(todo.size(), c.jobs, [&](std::size_t i, int) {
    const CatalogEntry& e = *todo[i];
    auto P = e.polytope();
    auto cfg = configurationOf(P);
    centralTriangulations(P, [&](const CentralTriangulation& T) {
      perPolytope[i].push_back({e.id, T, isRegular<3>(cfg, T)});
      return true;
    });
    std::size_t n = ++done;
    if (n % 1000 == 0) {
      std::lock_guard lock(logMutex);
      *c.log << "triangulate: " << n << "/" << todo.size() << " polytopes\n";
    }
  });

  io::RecordWriter w(c.paths.triangulations);
  std::size_t total = 0, regular = 0;
  for (const auto& list : perPolytope)
    for (const auto& r : list) {
      w.write(io::triangulationRecord(r));
      ++total;
      regular += r.certificate.has_value();
    }
  w.commit();
  *c.log << "triangulate: " << todo.size() << " polytopes, " << total << " central triangulations, "
         << regular << " regular\n";
}

// ---------------------------------------------------------------------------
// K3 statistics

struct TypeInfo {
  std::int64_t vertices = 0;
  std::vector<std::vector<int>> facets;
  std::set<int> polytopes;
};

struct StatsAccumulator {
  std::map<std::int64_t, std::int64_t> regularByVertices, totalByVertices;
  std::map<std::int64_t, std::set<std::string>> typesByVertices;
  std::map<std::string, TypeInfo> minimalTypes;
  std::map<int, int> regularPerMinimal;
  std::int64_t combinatorics = 0, eulerFailures = 0, simplicityFailures = 0, parityFailures = 0;
  std::int64_t nonUnimodular = 0, certificates = 0, roundTripFailures = 0;
  std::int64_t regionsChecked = 0, regionMismatches = 0;

  void merge(StatsAccumulator&& o) {
    for (auto& [k, v] : o.regularByVertices) regularByVertices[k] += v;
    for (auto& [k, v] : o.totalByVertices) totalByVertices[k] += v;
    for (auto& [k, v] : o.typesByVertices) typesByVertices[k].merge(v);
    for (auto& [k, v] : o.minimalTypes) {
      auto [it, fresh] = minimalTypes.try_emplace(k, v);
      if (!fresh) it->second.polytopes.merge(v.polytopes);
    }
    for (auto& [k, v] : o.regularPerMinimal) regularPerMinimal[k] += v;
    combinatorics += o.combinatorics;
    eulerFailures += o.eulerFailures;
    simplicityFailures += o.simplicityFailures;
    parityFailures += o.parityFailures;
    nonUnimodular += o.nonUnimodular;
    certificates += o.certificates;
    roundTripFailures += o.roundTripFailures;
    regionsChecked += o.regionsChecked;
    regionMismatches += o.regionMismatches;
  }
};

/// Type keys are computed for K3 polytopes with at most this many vertices.
inline constexpr std::int64_t kTypeVertexBound = 18;

inline void accumulateTriangulation(StatsAccumulator& acc, const CatalogEntry& e,
                                    const PointConfiguration<3>& cfg,
                                    const io::TriangulationRecord& r) {
  const auto& T = r.triangulation;
  auto k = dualCombinatorics(cfg, T);
  ++acc.combinatorics;
  acc.eulerFailures += !satisfiesEuler(k.fVector);
  acc.simplicityFailures += !isSimpleFVector(k.fVector);
  acc.parityFailures += k.fVector[0] % 2 != 0;
  acc.nonUnimodular += !isUnimodular<3>(cfg, T);
  acc.totalByVertices[k.fVector[0]]++;
  if (!r.certificate) return;

  acc.regularByVertices[k.fVector[0]]++;
  ++acc.certificates;
  acc.roundTripFailures += !certifies<3>(cfg, T, *r.certificate);
  auto region = boundedRegion(cfg, r.certificate->heights);
  ++acc.regionsChecked;
  acc.regionMismatches += region.fVector() != k.fVector;
  if (k.fVector[0] > kTypeVertexBound) return;
  auto key = graphCanonicalKey(k);
  acc.typesByVertices[k.fVector[0]].insert(key);
  if (e.minimal.value_or(false)) {
    acc.regularPerMinimal[e.id]++;
    auto [it, fresh] = acc.minimalTypes.try_emplace(key);
    if (fresh) {
      it->second.vertices = k.fVector[0];
      it->second.facets = k.facetLists;
    }
    it->second.polytopes.insert(e.id);
  }
}

inline Json statsJson(const PipelineConfig& c, const std::map<FVector, std::int64_t>& histogram,
                      const StatsAccumulator& acc, std::span<const CatalogEntry> entries) {
  Json j;
  j["max_points"] = c.maxLatticePoints;
  j["max_vertices"] = c.maxVertices;
  Json h = Json::array();
  for (const auto& [f, n] : histogram) h.push_back({{"f", f}, {"count", n}});
  j["fvector_histogram"] = h;

  Json byV = Json::array();
  for (const auto& [v, total] : acc.totalByVertices) {
    auto reg = acc.regularByVertices.count(v) ? acc.regularByVertices.at(v) : 0;
    byV.push_back({{"vertices", v}, {"regular", reg}, {"total", total}});
  }
  j["triangulations_by_vertices"] = byV;

  Json types = Json::array();
  for (const auto& [v, keys] : acc.typesByVertices)
    types.push_back({{"vertices", v}, {"types", keys.size()}});
  j["types_by_vertices"] = types;

  // Minimal polytopes outside the enumerated range are counted under -1.
  std::map<int, int> perMinimal;
  for (const auto& e : entries) {
    if (!e.minimal.value_or(false)) continue;
    if (!c.inRange(e)) {
      perMinimal[-1]++;
      continue;
    }
    auto it = acc.regularPerMinimal.find(e.id);
    perMinimal[it == acc.regularPerMinimal.end() ? 0 : it->second]++;
  }
  Json pm = Json::array();
  for (const auto& [n, count] : perMinimal) pm.push_back({{"regular", n}, {"polytopes", count}});
  j["minimal_regular_counts"] = pm;

  Json mt = Json::array();
  for (const auto& [key, info] : acc.minimalTypes)
    mt.push_back({{"key", key}, {"vertices", info.vertices}, {"facets", info.facets},
                  {"polytopes", std::vector<int>(info.polytopes.begin(), info.polytopes.end())}});
  j["minimal_types"] = mt;

  j["checks"] = {{"combinatorics", acc.combinatorics},
                 {"euler_failures", acc.eulerFailures},
                 {"simplicity_failures", acc.simplicityFailures},
                 {"parity_failures", acc.parityFailures},
                 {"non_unimodular", acc.nonUnimodular},
                 {"certificates", acc.certificates},
                 {"round_trip_failures", acc.roundTripFailures},
                 {"regions_checked", acc.regionsChecked},
                 {"region_mismatches", acc.regionMismatches}};
  return j;
}

/// The f-vector histogram covers every reflexive entry (one central
/// triangulation each); everything else is aggregated over triangs.jsonl.
inline void k3StatsStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.stats, "k3-stats")) return;
  auto entries = io::readEntries(c.paths.minimal);
  std::map<int, const CatalogEntry*> byId;
  for (const auto& e : entries) byId[e.id] = &e;

  std::vector<std::vector<io::TriangulationRecord>> groups;
  io::forEachRecord(c.paths.triangulations, [&](const Json& j) {
    auto r = io::parseTriangulationRecord(j);
    if (!byId.count(r.polytopeId)) throw ParseError("triangulation of unknown polytope " + std::to_string(r.polytopeId));
    if (groups.empty() || groups.back().front().polytopeId != r.polytopeId) groups.emplace_back();
    groups.back().push_back(std::move(r));
  });

  int workers = std::max(1, c.jobs);
  std::vector<std::map<FVector, std::int64_t>> histograms(workers);
  parallelFor(entries.size(), c.jobs, [&](std::size_t i, int w) {
    auto P = entries[i].polytope();
    auto cfg = configurationOf(P);
    centralTriangulations(P, [&](const CentralTriangulation& T) {
      histograms[w][dualFVector(cfg, T)]++;
      return false;
    });
  });
  std::map<FVector, std::int64_t> histogram;
  for (auto& h : histograms)
    for (auto& [f, n] : h) histogram[f] += n;
  *c.log << "k3-stats: f-vector histogram over " << entries.size() << " reflexive polytopes\n";

  std::vector<StatsAccumulator> accs(workers);
  parallelFor(groups.size(), c.jobs, [&](std::size_t g, int w) {
    const CatalogEntry& e = *byId.at(groups[g].front().polytopeId);
    auto cfg = configurationOf(e.polytope());
    for (const auto& r : groups[g]) accumulateTriangulation(accs[w], e, cfg, r);
  });
  StatsAccumulator acc;
  for (auto& a : accs) acc.merge(std::move(a));
  io::writeJson(c.paths.stats, statsJson(c, histogram, acc, entries));
  *c.log << "k3-stats: " << acc.combinatorics << " triangulations, " << acc.certificates
         << " certificates\n";
}

// ---------------------------------------------------------------------------
// Singularities and verdicts

inline void classifySingularitiesStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.singularities, "classify-singularities")) return;
  auto entries = io::readEntries(c.paths.minimal);
  std::vector<const CatalogEntry*> minimal;
  for (const auto& e : entries)
    if (e.minimal.value_or(false)) minimal.push_back(&e);
  std::vector<std::vector<SingularityReport>> reports(minimal.size());
  parallelFor(minimal.size(), c.jobs, [&](std::size_t i, int) {
    reports[i] = singularLocusReports(QuarticSupport::of(minimal[i]->points()), c.seed, c.seeds);
  });
  io::RecordWriter w(c.paths.singularities);
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    Verdict v = allRationalDoublePoints(reports[i]) ? Verdict::Stable : Verdict::Unknown;
    for (const auto& r : reports[i]) w.write(io::singularityRecord(minimal[i]->id, r, v));
  }
  w.commit();
  *c.log << "classify-singularities: " << minimal.size() << " minimal polytopes\n";
}

inline std::map<int, std::vector<SingularityReport>> readReports(const fs::path& path) {
  std::map<int, std::vector<SingularityReport>> out;
  io::forEachRecord(path, [&](const Json& j) {
    auto s = io::parseSingularityRecord(j);
    out[s.polytopeId].push_back(std::move(s.report));
  });
  return out;
}

inline void verdictsStage(const PipelineConfig& c) {
  if (detail::upToDate(c, c.paths.verdicts, "verdicts")) return;
  auto entries = io::readEntries(c.paths.minimal);
  auto reports = readReports(c.paths.singularities);
  for (const auto& e : entries)
    if (e.minimal.value_or(false) && !reports.count(e.id)) reports[e.id] = {};
  auto verdicts = stabilityVerdicts(entries, reports);
  io::RecordWriter w(c.paths.verdicts);
  std::size_t stable = 0;
  for (const auto& v : verdicts) {
    w.write(io::verdictRecord(v));
    stable += v.verdict == Verdict::Stable;
  }
  w.commit();
  *c.log << "verdicts: " << stable << "/" << verdicts.size() << " stable\n";
}

/// Runs one producing stage (everything except verify).
inline void runProducingStage(const std::string& name, const PipelineConfig& c) {
  if (name == "enumerate-canonical") enumerateCanonicalStage(c);
  else if (name == "filter-reflexive") filterReflexiveStage(c);
  else if (name == "minimal") minimalStage(c);
  else if (name == "triangulate") triangulateStage(c);
  else if (name == "k3-stats") k3StatsStage(c);
  else if (name == "classify-singularities") classifySingularitiesStage(c);
  else if (name == "verdicts") verdictsStage(c);
  else throw Error("not a producing stage: " + name);
}

}  // namespace k3forge::pipeline
