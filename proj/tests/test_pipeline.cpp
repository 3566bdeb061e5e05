#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "k3forge/io.hpp"
#include "k3forge/pipeline.hpp"

using namespace k3forge;
namespace fs = std::filesystem;

namespace {

fs::path freshDir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("k3forge_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CatalogEntry entryOf(int id, const std::vector<LatticePoint>& pts) {
  const auto& t = SimplexMasks::instance();
  CatalogEntry e;
  e.id = id;
  e.mask = t.canonicalMask(t.maskOf(pts));
  e.volume = t.polytope(e.mask).normalizedVolume;
  e.reflexive = maskIsReflexive(e.mask);
  e.minimal = e.reflexive && isMinimalReflexive(e.mask);
  return e;
}

// A few reflexive entries, witnesses resolved by containment among them.
std::vector<CatalogEntry> smallSubset() {
  std::vector<CatalogEntry> es{entryOf(0, fixtures::fivePoint()), entryOf(7, fixtures::octahedron()),
                               entryOf(21, fixtures::sixPoint()), entryOf(965, fixtures::withNonRegular()),
                               entryOf(2946, fixtures::manyTypes())};
  const auto& t = SimplexMasks::instance();
  for (auto& e : es) {
    for (const auto& w : es) {
      if (!w.minimal.value()) continue;
      for (std::size_t g = 0; g < s4Permutations().size(); ++g)
        if ((t.image(w.mask, g) & ~e.mask) == 0) {
          e.minimalWitnessId = w.id;
          break;
        }
      if (e.minimalWitnessId) break;
    }
  }
  return es;
}

pipeline::PipelineConfig configIn(const fs::path& dir, int jobs, std::ostream& log) {
  pipeline::PipelineConfig c;
  c.paths = pipeline::Paths::in(dir);
  c.jobs = jobs;
  c.log = &log;
  return c;
}

void seed(const fs::path& dir) {
  auto es = smallSubset();
  pipeline::detail::writeEntries(dir / "reflexive.jsonl", es);
  pipeline::detail::writeEntries(dir / "minimal.jsonl", es);
}

const std::vector<std::string> kDownstream{"triangulate", "k3-stats", "classify-singularities", "verdicts"};

}  // namespace

TEST(Io, CatalogRecordRoundTrip) {
  for (const auto& e : smallSubset()) {
    auto back = io::parseCatalogRecord(io::catalogRecord(e));
    EXPECT_EQ(back.id, e.id);
    EXPECT_EQ(back.mask, e.mask);
    EXPECT_EQ(back.volume, e.volume);
    EXPECT_EQ(back.reflexive, e.reflexive);
    EXPECT_EQ(back.minimal, e.minimal);
    EXPECT_EQ(back.minimalWitnessId, e.minimalWitnessId);
  }
}

TEST(Io, TriangulationRecordRoundTrip) {
  auto P = convexHull(fixtures::withNonRegular());
  auto cfg = configurationOf(P);
  centralTriangulations(P, [&](const CentralTriangulation& T) {
    io::TriangulationRecord r{965, T, isRegular<3>(cfg, T)};
    auto back = io::parseTriangulationRecord(io::triangulationRecord(r));
    EXPECT_EQ(back.polytopeId, 965);
    EXPECT_EQ(back.triangulation, T);
    EXPECT_EQ(back.certificate.has_value(), r.certificate.has_value());
    if (r.certificate && back.certificate) EXPECT_EQ(back.certificate->heights, r.certificate->heights);
    return true;
  });
}

TEST(Io, SingularityAndVerdictRecordsRoundTrip) {
  auto S = QuarticSupport::of(fixtures::fivePoint());
  for (const auto& r : singularLocusReports(S, 1)) {
    auto back = io::parseSingularityRecord(io::singularityRecord(0, r, Verdict::Stable));
    EXPECT_EQ(back.polytopeId, 0);
    EXPECT_EQ(back.report.point, r.point);
    EXPECT_EQ(back.report.type, r.type);
    EXPECT_EQ(back.report.multiplicity, r.multiplicity);
    EXPECT_EQ(back.report.count, r.count);
  }
  StabilityVerdict v{21, Verdict::Stable, VerdictBasis::Propagated, 0};
  auto back = io::parseVerdictRecord(io::verdictRecord(v));
  EXPECT_EQ(back.polytopeId, 21);
  EXPECT_EQ(back.verdict, Verdict::Stable);
  EXPECT_EQ(back.basis, VerdictBasis::Propagated);
  EXPECT_EQ(back.witnessId, 0);
}

TEST(Io, MissingAndMalformedArtifacts) {
  auto dir = freshDir("io");
  EXPECT_THROW(io::readEntries(dir / "absent.jsonl"), MissingArtifact);
  EXPECT_THROW(io::readJson(dir / "absent.json"), MissingArtifact);
  {
    std::ofstream out(dir / "bad.jsonl");
    out << io::catalogRecord(entryOf(0, fixtures::fivePoint())).dump() << "\n{not json\n";
  }
  try {
    io::readEntries(dir / "bad.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  // Ids of a full catalog must be positions.
  pipeline::detail::writeEntries(dir / "gap.jsonl", std::vector<CatalogEntry>{entryOf(3, fixtures::fivePoint())});
  EXPECT_THROW(io::readCatalog(dir / "gap.jsonl"), ParseError);
}

TEST(Io, WriterLeavesNoPartialFile) {
  auto dir = freshDir("writer");
  io::writeJson(dir / "x.json", io::Json{{"a", 1}});
  EXPECT_TRUE(fs::exists(dir / "x.json"));
  EXPECT_FALSE(fs::exists(dir / "x.json.partial"));
  EXPECT_EQ(io::readJson(dir / "x.json")["a"], 1);
}

TEST(Pipeline, MissingUpstreamArtifact) {
  auto dir = freshDir("missing");
  std::ostringstream log;
  auto c = configIn(dir, 1, log);
  EXPECT_THROW(pipeline::runProducingStage("triangulate", c), MissingArtifact);
  EXPECT_THROW(pipeline::runProducingStage("k3-stats", c), MissingArtifact);
  EXPECT_FALSE(fs::exists(c.paths.triangulations));
}

TEST(Pipeline, ConfigValidation) {
  pipeline::PipelineConfig c;
  c.stages = {"triangulate"};
  EXPECT_NO_THROW(c.validate());
  c.stages = {"bogus"};
  EXPECT_THROW(c.validate(), Error);
  c.stages = {};
  c.jobs = 0;
  EXPECT_THROW(c.validate(), Error);
}

// Output is a function of the inputs only: worker count changes nothing.
TEST(Pipeline, DeterministicAcrossWorkerCounts) {
  std::ostringstream log;
  auto one = freshDir("jobs1"), three = freshDir("jobs3");
  seed(one);
  seed(three);
  for (const auto& s : kDownstream) {
    pipeline::runProducingStage(s, configIn(one, 1, log));
    pipeline::runProducingStage(s, configIn(three, 3, log));
  }
  for (const char* f : {"triangs.jsonl", "k3stats.json", "sing.jsonl", "verdicts.jsonl"}) {
    ASSERT_TRUE(fs::exists(one / f)) << f;
    EXPECT_EQ(slurp(one / f), slurp(three / f)) << f;
  }
}

TEST(Pipeline, SmallSubsetContents) {
  std::ostringstream log;
  auto dir = freshDir("contents");
  seed(dir);
  auto c = configIn(dir, 2, log);
  for (const auto& s : kDownstream) pipeline::runProducingStage(s, c);

  std::map<int, int> total, regular;
  int last = -1;
  io::forEachRecord(c.paths.triangulations, [&](const io::Json& j) {
    auto r = io::parseTriangulationRecord(j);
    EXPECT_GE(r.polytopeId, last);  // ordered by polytope id
    last = r.polytopeId;
    total[r.polytopeId]++;
    regular[r.polytopeId] += r.certificate.has_value();
  });
  EXPECT_EQ(total[0], 1);
  EXPECT_EQ(total[7], 1);
  EXPECT_EQ(total[965], 8);
  EXPECT_EQ(regular[965], 6);
  EXPECT_EQ(total[2946], 5);

  auto stats = io::readJson(c.paths.stats);
  EXPECT_EQ(stats["checks"]["euler_failures"], 0);
  EXPECT_EQ(stats["checks"]["non_unimodular"], 0);
  EXPECT_EQ(stats["checks"]["round_trip_failures"], 0);
  EXPECT_EQ(stats["checks"]["region_mismatches"], 0);

  auto verdicts = io::readEntries(c.paths.minimal).size();
  std::size_t n = 0;
  io::forEachRecord(c.paths.verdicts, [&](const io::Json&) { ++n; });
  EXPECT_EQ(n, verdicts);
}

TEST(Pipeline, RerunIsNoOpUnlessForced) {
  std::ostringstream log;
  auto dir = freshDir("rerun");
  seed(dir);
  auto c = configIn(dir, 1, log);
  pipeline::runProducingStage("triangulate", c);
  auto before = fs::last_write_time(c.paths.triangulations);
  auto content = slurp(c.paths.triangulations);
  {
    std::ofstream(c.paths.triangulations) << "sentinel\n";
  }
  pipeline::runProducingStage("triangulate", c);
  EXPECT_EQ(slurp(c.paths.triangulations), "sentinel\n");
  EXPECT_NE(log.str().find("skipping"), std::string::npos);
  c.force = true;
  pipeline::runProducingStage("triangulate", c);
  EXPECT_EQ(slurp(c.paths.triangulations), content);
  (void)before;
}

#ifdef K3FORGE_BIN
namespace {

int run(const std::string& args) {
  std::string cmd = std::string(K3FORGE_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  auto dir = freshDir("cli");
  EXPECT_EQ(run("--no-such-flag"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("triangulate --dir " + dir.string() + " --jobs 0"), 2);
  EXPECT_EQ(run("triangulate --dir " + dir.string()), 1);
  seed(dir);
  EXPECT_EQ(run("triangulate --dir " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "triangs.jsonl"));
  EXPECT_EQ(run("export-off --out " + (dir / "smooth.off").string()), 0);
  EXPECT_EQ(slurp(dir / "smooth.off").substr(0, 4), "OFF\n");
}
#endif
