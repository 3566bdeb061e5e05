#pragma once

// JSONL records for every pipeline artifact. Field order is fixed
// (ordered_json) and rationals are "num/den" strings, so files diff cleanly
// and round-trip exactly.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adeclass.hpp"
#include "catalog.hpp"
#include "k3dual.hpp"
#include "triangulate.hpp"

namespace k3forge::io {

using Json = nlohmann::ordered_json;

inline Json pointsJson(std::span<const LatticePoint> pts) {
  Json a = Json::array();
  for (const auto& q : pts) a.push_back({q[0], q[1], q[2]});
  return a;
}

inline Json rationalsJson(std::span<const Rational> xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(toString(x));
  return a;
}

inline std::vector<Rational> parseRationals(const Json& a) {
  std::vector<Rational> out;
  for (const auto& s : a) out.push_back(parseRational(s.get<std::string>()));
  return out;
}

// ---------------------------------------------------------------------------
// Catalog

inline Json catalogRecord(const CatalogEntry& e) {
  Json j;
  j["id"] = e.id;
  j["points"] = pointsJson(e.points());
  j["volume"] = e.volume;
  j["reflexive"] = e.reflexive;
  j["key"] = e.key().str();
  j["minimal"] = e.minimal ? Json(*e.minimal) : Json(nullptr);
  j["witness"] = e.minimalWitnessId ? Json(*e.minimalWitnessId) : Json(nullptr);
  return j;
}

inline CatalogEntry parseCatalogRecord(const Json& j) {
  try {
    CatalogEntry e;
    e.id = j.at("id").get<int>();
    std::vector<LatticePoint> pts;
    for (const auto& q : j.at("points")) pts.push_back({q.at(0).get<std::int64_t>(), q.at(1).get<std::int64_t>(),
                                                        q.at(2).get<std::int64_t>()});
    e.mask = SimplexMasks::instance().maskOf(pts);
    e.volume = j.at("volume").get<std::int64_t>();
    e.reflexive = j.at("reflexive").get<bool>();
    if (j.contains("minimal") && !j["minimal"].is_null()) e.minimal = j["minimal"].get<bool>();
    if (j.contains("witness") && !j["witness"].is_null()) e.minimalWitnessId = j["witness"].get<int>();
    return e;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("catalog record: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Triangulations

struct TriangulationRecord {
  int polytopeId = -1;
  CentralTriangulation triangulation;
  std::optional<HeightCertificate> certificate;  // present iff regular
};

inline Json triangulationRecord(const TriangulationRecord& r) {
  Json j;
  j["polytope_id"] = r.polytopeId;
  Json s = Json::array();
  for (const auto& simplex : r.triangulation.simplices) s.push_back(simplex);
  j["simplices"] = s;
  j["regular"] = r.certificate.has_value();
  if (r.certificate) j["heights"] = rationalsJson(r.certificate->heights);
  return j;
}

inline TriangulationRecord parseTriangulationRecord(const Json& j) {
  try {
    TriangulationRecord r;
    r.polytopeId = j.at("polytope_id").get<int>();
    for (const auto& s : j.at("simplices")) r.triangulation.simplices.push_back(s.get<SimplexIndices<3>>());
    if (j.at("regular").get<bool>()) r.certificate = HeightCertificate{parseRationals(j.at("heights"))};
    return r;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("triangulation record: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Singularities and verdicts

inline std::string verdictName(Verdict v) { return v == Verdict::Stable ? "stable" : "unknown"; }

inline std::string basisName(VerdictBasis b) {
  switch (b) {
    case VerdictBasis::Direct: return "direct";
    case VerdictBasis::Propagated: return "propagated";
    default: return "none";
  }
}

inline Verdict parseVerdict(const std::string& s) {
  if (s == "stable") return Verdict::Stable;
  if (s == "unknown") return Verdict::Unknown;
  throw ParseError("bad verdict: " + s);
}

inline VerdictBasis parseBasis(const std::string& s) {
  if (s == "direct") return VerdictBasis::Direct;
  if (s == "propagated") return VerdictBasis::Propagated;
  if (s == "none") return VerdictBasis::None;
  throw ParseError("bad verdict basis: " + s);
}

/// `verdict` is the owning polytope's direct verdict.
inline Json singularityRecord(int polytopeId, const SingularityReport& r, Verdict verdict) {
  Json j;
  j["polytope_id"] = polytopeId;
  j["point"] = locationOf(r);
  j["count"] = r.count;
  j["multiplicity"] = r.multiplicity;
  j["type"] = r.type.str();
  j["trace"] = r.trace;
  j["round_trip"] = r.roundTrip;
  j["verdict"] = verdictName(verdict);
  return j;
}

struct SingularityRecord {
  int polytopeId = -1;
  SingularityReport report;
  Verdict verdict = Verdict::Unknown;
};

inline SingularityRecord parseSingularityRecord(const Json& j) {
  try {
    SingularityRecord s;
    s.polytopeId = j.at("polytope_id").get<int>();
    const std::string loc = j.at("point").get<std::string>();
    auto& r = s.report;
    if (!loc.empty() && loc[0] == '[') {
      r.point = -1;
      for (int v = 0; v < 4; ++v)
        if (loc.at(1 + 2 * v) == '1') r.point = v;
      if (r.point < 0) throw ParseError("singularity record: bad point " + loc);
    } else {
      r.point = -1;
      static const std::string names = "xyzw";
      for (char c : loc)
        if (auto v = names.find(c); v != std::string::npos) r.line[v] = true;
    }
    r.count = j.at("count").get<int>();
    r.multiplicity = j.at("multiplicity").get<int>();
    r.type = parseAdeType(j.at("type").get<std::string>());
    r.trace = j.at("trace").get<std::vector<std::string>>();
    r.roundTrip = j.at("round_trip").get<bool>();
    s.verdict = parseVerdict(j.at("verdict").get<std::string>());
    return s;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("singularity record: ") + ex.what());
  }
}

inline Json verdictRecord(const StabilityVerdict& v) {
  Json j;
  j["polytope_id"] = v.polytopeId;
  j["verdict"] = verdictName(v.verdict);
  j["basis"] = basisName(v.basis);
  j["witness"] = v.witnessId ? Json(*v.witnessId) : Json(nullptr);
  return j;
}

inline StabilityVerdict parseVerdictRecord(const Json& j) {
  try {
    StabilityVerdict v;
    v.polytopeId = j.at("polytope_id").get<int>();
    v.verdict = parseVerdict(j.at("verdict").get<std::string>());
    v.basis = parseBasis(j.at("basis").get<std::string>());
    if (!j.at("witness").is_null()) v.witnessId = j["witness"].get<int>();
    return v;
  } catch (const Json::exception& ex) {
    throw ParseError(std::string("verdict record: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Files

/// Calls `f(json)` for each non-empty line; MissingArtifact if absent.
template <typename F>
void forEachRecord(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("missing artifact: " + path.string());
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& ex) {
      throw ParseError(path.string() + ":" + std::to_string(lineNo) + ": " + ex.what());
    }
    f(j);
  }
}

/// Writes to a temporary sibling and renames, so a crash never leaves a
/// truncated artifact that looks complete.
class RecordWriter {
 public:
  explicit RecordWriter(std::filesystem::path path)
      : path_(std::move(path)), tmp_(path_.string() + ".partial"), out_(tmp_) {
    if (!out_) throw Error("cannot write " + tmp_.string());
  }
  void write(const Json& j) { out_ << j.dump() << '\n'; }
  void commit() {
    out_.close();
    if (!out_) throw Error("write failed for " + tmp_.string());
    std::filesystem::rename(tmp_, path_);
  }

 private:
  std::filesystem::path path_, tmp_;
  std::ofstream out_;
};

inline void writeJson(const std::filesystem::path& path, const Json& j) {
  RecordWriter w(path);
  w.write(j);
  w.commit();
}

inline Json readJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("missing artifact: " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
}

/// Entries with their stored ids (subsets of the catalog keep catalog ids).
inline std::vector<CatalogEntry> readEntries(const std::filesystem::path& path) {
  std::vector<CatalogEntry> entries;
  forEachRecord(path, [&](const Json& j) { entries.push_back(parseCatalogRecord(j)); });
  return entries;
}

/// The full catalog, whose ids are its positions.
inline Catalog readCatalog(const std::filesystem::path& path) {
  auto entries = readEntries(path);
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].id != static_cast<int>(i)) throw ParseError(path.string() + ": ids are not 0..n-1");
  return Catalog(std::move(entries));
}

}  // namespace k3forge::io
