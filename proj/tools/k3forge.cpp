// k3forge: runs the pipeline stages over a working directory.
// Exit status: 0 success, 1 failed check or runtime error, 2 usage error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "k3forge/acceptance.hpp"
#include "k3forge/pipeline.hpp"

using namespace k3forge;
namespace fs = std::filesystem;

namespace {

constexpr int kCheckFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int runVerify(const pipeline::PipelineConfig& c, const fs::path& dir) {
  auto results = acceptance::verify(c, dir / "verify");
  for (const auto& r : results) std::cout << acceptance::formatLine(r) << "\n";
  bool ok = acceptance::allPass(results);
  std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? 0 : kCheckFailure;
}

/// weights.json: {"support": [[a,b,c],...], "weights": ["p/q",...], "point": [a,b,c]}.
/// "point" defaults to (1,1,1).
int exportOff(const fs::path& weightsPath, const fs::path& out) {
  std::vector<LatticePoint> support;
  std::vector<Rational> weights;
  LatticePoint p = kInteriorPoint;
  if (weightsPath.empty()) {
    support = fourSimplex().latticePoints;
    weights = smoothQuarticWeights(support);
  } else {
    auto j = io::readJson(weightsPath);
    try {
      for (const auto& q : j.at("support"))
        support.push_back({q.at(0).get<std::int64_t>(), q.at(1).get<std::int64_t>(), q.at(2).get<std::int64_t>()});
      for (const auto& w : j.at("weights"))
        weights.push_back(w.is_string() ? parseRational(w.get<std::string>()) : Rational(w.get<std::int64_t>()));
      if (j.contains("point")) {
        const auto& q = j["point"];
        p = {q.at(0).get<std::int64_t>(), q.at(1).get<std::int64_t>(), q.at(2).get<std::int64_t>()};
      }
    } catch (const io::Json::exception& ex) {
      throw ParseError(weightsPath.string() + ": " + ex.what());
    }
  }
  auto region = boundedRegion(support, weights, p);
  exportMesh(region, out.string());
  auto f = region.fVector();
  std::cout << "wrote " << out.string() << ": f-vector (" << f[0] << ", " << f[1] << ", " << f[2] << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k3forge: tropical quartic surfaces and K3 polytopes"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  pipeline::PipelineConfig config;
  fs::path dir = ".";
  std::string out, in, catalog, weights;
  std::vector<std::string> stages;
  app.add_option("--dir", dir, "working directory holding the artifacts");
  app.add_option("--jobs,-j", config.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "seed for generic coefficients");
  app.add_option("--seeds", config.seeds, "independent samples per singular point")->check(CLI::PositiveNumber);
  app.add_option("--max-points", config.maxLatticePoints, "triangulate polytopes with at most this many lattice points");
  app.add_option("--max-vertices", config.maxVertices, "triangulate polytopes of volume at most this");
  app.add_flag("--force", config.force, "recompute artifacts that already exist");
  app.add_option("--out", out, "output path of the selected stage");

  std::vector<CLI::App*> stageCommands;
  for (const auto& name : pipeline::stageNames()) stageCommands.push_back(app.add_subcommand(name, "run the " + name + " stage"));
  auto* stats = stageCommands[4];
  stats->add_option("--in", in, "triangulation records");
  auto* sing = stageCommands[5];
  sing->add_option("--catalog", catalog, "minimal catalog records");
  auto* run = app.add_subcommand("run", "run several stages in order");
  run->add_option("--stage", stages, "stages to run (default: all)");
  auto* off = app.add_subcommand("export-off", "write the bounded region of a tropical quartic as OFF");
  off->add_option("--weights", weights, "weights JSON (default: the smooth quartic with full support)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    config.paths = pipeline::Paths::in(dir);
    if (off->parsed()) return exportOff(weights, out.empty() ? fs::path("region.off") : fs::path(out));

    std::string name;
    for (std::size_t i = 0; i < stageCommands.size(); ++i)
      if (stageCommands[i]->parsed()) name = pipeline::stageNames()[i];
    config.stages = run->parsed() ? (stages.empty() ? pipeline::stageNames() : stages)
                                  : std::vector<std::string>{name};
    if (!in.empty()) config.paths.triangulations = in;
    if (!catalog.empty()) config.paths.minimal = catalog;
    if (!out.empty()) {
      if (config.stages.size() != 1) throw UsageError("--out needs a single stage");
      auto& p = config.paths;
      fs::path* targets[] = {&p.catalog, &p.reflexive, &p.minimal, &p.triangulations,
                             &p.stats, &p.singularities, &p.verdicts};
      auto idx = std::find(pipeline::stageNames().begin(), pipeline::stageNames().end(), config.stages[0]) -
                 pipeline::stageNames().begin();
      if (idx >= 7) throw UsageError("verify has no output file");
      *targets[idx] = out;
    }
    try {
      config.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }

    // Stages always run in pipeline order.
    int status = 0;
    for (const auto& stage : pipeline::stageNames()) {
      if (std::find(config.stages.begin(), config.stages.end(), stage) == config.stages.end()) continue;
      if (stage == "verify") status = runVerify(config, dir);
      else pipeline::runProducingStage(stage, config);
    }
    return status;
  } catch (const UsageError& e) {
    std::cerr << "k3forge: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "k3forge: " << e.what() << "\n";
    return kCheckFailure;
  }
}
