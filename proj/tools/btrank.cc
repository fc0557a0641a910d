// btrank: rank teams from paired-comparison data.
//
//   btrank check    --data games.csv
//   btrank fit      --data games.csv --model davidson --epsilon auto
//   btrank sweep    --data m.json --epsilons 0.001,0.01,0.1 --ratios
//   btrank map      --data m.json --shape 1.5
//   btrank seeds    --data games.csv --divisions league.json --key pct
//   btrank simulate --t-grid 20,50,100 --replicas 50 --out report.json
//
// Exit codes: 0 ok, 1 existence failure or failed check, 2 parse error,
// 3 non-convergence, 4 configuration error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "btrank/connectivity.h"
#include "btrank/errors.h"
#include "btrank/ingestion.h"
#include "btrank/perturbation.h"
#include "btrank/ranking.h"
#include "btrank/report.h"
#include "btrank/seeding.h"
#include "btrank/sim.h"
#include "btrank/solver.h"
#include "fmt/format.h"

namespace {

using namespace btrank;

constexpr int kExitCheckFailed = 1;

struct DataOptions {
  std::string path;
  std::string format;  // empty: detect
};

struct OutputOptions {
  std::string out = "table";
  int jobs = 1;
};

struct ModelOptions {
  std::string model = "bt";
  std::string epsilon = "auto";
  std::string perturbation = "improved";
  std::string normalization = "reference";
  double grad_tol = SolverConfig{}.grad_tol;
  int max_iters = SolverConfig{}.max_iters;
  int restarts = 0;
  std::uint64_t seed = 0;
};

std::uint64_t DefaultSeed() {
  const char* env = std::getenv("BTRANK_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    size_t used = 0;
    const unsigned long long value = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("BTRANK_SEED is not an integer: '{}'", env));
  }
}

void AddDataFlags(CLI::App* app, DataOptions& data) {
  app->add_option("--data", data.path, "Game records or count matrices")
      ->required();
  app->add_option("--format", data.format, "Input format (default: detect)")
      ->check(CLI::IsMember({"csv", "records-json", "matrix-json"}));
}

void AddOutputFlags(CLI::App* app, OutputOptions& out) {
  app->add_option("--out", out.out,
                  "table, json, or a file path that receives the JSON");
  app->add_option("--jobs", out.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void AddSolverFlags(CLI::App* app, ModelOptions& m) {
  app->add_option("--grad-tol", m.grad_tol, "Gradient sup-norm tolerance")
      ->check(CLI::PositiveNumber);
  app->add_option("--max-iters", m.max_iters, "Iteration budget")
      ->check(CLI::PositiveNumber);
  app->add_option("--restarts", m.restarts, "Extra random starts")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--seed", m.seed, "Seed for random starts (env BTRANK_SEED)");
}

void AddModelFlags(CLI::App* app, ModelOptions& m, bool with_epsilon = true) {
  app->add_option("--model", m.model,
                  "bt, rao-kupper, davidson, home-field or david")
      ->check(CLI::IsMember({"bt", "rao-kupper", "davidson", "home-field", "david"}));
  if (with_epsilon) {
    app->add_option("--epsilon", m.epsilon, "Perturbation size or 'auto'");
  }
  app->add_option("--perturbation", m.perturbation,
                  "improved, conner-grant or matrix:<file>");
  app->add_option("--normalization", m.normalization,
                  "reference[:TEAM] or simplex");
  AddSolverFlags(app, m);
}

Dataset Load(const DataOptions& data) {
  const std::string bytes = ReadFile(data.path);
  DataFormat format;
  if (data.format.empty()) {
    format = DetectFormat(data.path, bytes);
  } else if (data.format == "csv") {
    format = DataFormat::kCsv;
  } else if (data.format == "records-json") {
    format = DataFormat::kRecordsJson;
  } else {
    format = DataFormat::kMatrixJson;
  }
  try {
    return ParseDataset(bytes, format);
  } catch (ParseError& e) {
    e.AddContext(data.path);
    throw;
  }
}

double ResolveEpsilon(const std::string& text, int num_teams) {
  if (text == "auto") return AutoEpsilon(num_teams);
  try {
    size_t used = 0;
    const double eps = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return eps;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("epsilon must be a number or 'auto', got '{}'", text));
  }
}

Normalization ResolveNormalization(const std::string& text, const Dataset& data) {
  if (text == "simplex") return Normalization::Simplex();
  if (text == "reference") return Normalization::Reference(0);
  const std::string prefix = "reference:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string team = text.substr(prefix.size());
    const auto index = data.IndexOf(team);
    if (!index) throw ConfigError(fmt::format("unknown reference team '{}'", team));
    return Normalization::Reference(*index);
  }
  throw ConfigError(fmt::format("unknown normalization '{}'", text));
}

PerturbationSpec ResolvePerturbation(const std::string& text, double epsilon) {
  if (text == "improved") return PerturbationSpec::Improved(epsilon);
  if (text == "conner-grant") return PerturbationSpec::ConnerGrant(epsilon);
  const std::string prefix = "matrix:";
  if (text.rfind(prefix, 0) == 0) {
    return PerturbationSpec::Matrix(ParseRealMatrix(ReadFile(text.substr(prefix.size()))));
  }
  throw ConfigError(fmt::format("unknown perturbation '{}'", text));
}

SolverConfig ResolveSolver(const ModelOptions& m) {
  SolverConfig config;
  config.grad_tol = m.grad_tol;
  config.max_iters = m.max_iters;
  config.restarts = m.restarts;
  config.seed = m.seed;
  return config;
}

ModelSpec ResolveSpec(const ModelOptions& m, const Dataset& data, double epsilon) {
  ModelSpec spec;
  spec.model = *ParseModelName(m.model);
  spec.perturbation = ResolvePerturbation(m.perturbation, epsilon);
  spec.normalization = ResolveNormalization(m.normalization, data);
  return spec;
}

// Table to stdout; JSON to stdout or to a file.
void Emit(const OutputOptions& out, const std::string& table, const Json& json) {
  if (out.out == "table") {
    std::cout << table;
  } else if (out.out == "json") {
    std::cout << DumpJson(json);
  } else {
    std::ofstream file(out.out, std::ios::binary);
    if (!file) throw ConfigError(fmt::format("cannot write '{}'", out.out));
    file << DumpJson(json);
    std::cout << table;
  }
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("not a number: '{}'", item));
    }
  }
  if (values.empty()) throw ConfigError("empty list");
  return values;
}

int RunCheck(const DataOptions& data, const OutputOptions& out,
             const std::vector<std::string>& require) {
  const Dataset dataset = Load(data);
  std::vector<ConditionResult> results{CheckConditionA(dataset),
                                       CheckConditionB(dataset)};
  if (!dataset.venueless()) results.push_back(CheckConditionC(dataset));
  bool ok = true;
  for (const auto& r : results) {
    const std::string name(ConditionName(r.condition));
    const bool requested =
        require.empty() ||
        std::find(require.begin(), require.end(), name) != require.end();
    if (requested && !r.passed()) ok = false;
  }
  Json json = ChecksToJson(results, dataset.teams());
  Emit(out, ChecksTable(results, dataset.teams()), json);
  return ok ? 0 : kExitCheckFailed;
}

int RunFit(const DataOptions& data, const OutputOptions& out,
           const ModelOptions& m) {
  const Dataset dataset = Load(data);
  const double eps = ResolveEpsilon(m.epsilon, dataset.num_teams());
  const ModelSpec spec = ResolveSpec(m, dataset, eps);
  const FitResult fit = Fit(spec, dataset, ResolveSolver(m));
  RequireConverged(fit);
  Emit(out, FitTable(fit), FitResultToJson(fit));
  return 0;
}

int RunSweep(const DataOptions& data, const OutputOptions& out,
             const ModelOptions& m, const std::string& epsilons, bool ratios) {
  const Dataset dataset = Load(data);
  const std::vector<double> grid = ParseList(epsilons);
  const ModelSpec spec = ResolveSpec(m, dataset, grid.front());
  const SweepResult sweep =
      SweepEpsilon(spec, dataset, grid, ResolveSolver(m), out.jobs);
  for (const auto& entry : sweep.entries) RequireConverged(entry.fit);
  std::string table = SweepTable(sweep, dataset.teams());
  Json json = SweepToJson(sweep, dataset.teams());
  if (ratios) {
    if (sweep.stable) {
      const MonotoneRatioReport report = MonotoneRatioCheck(sweep);
      table += "\n" + MonotoneRatioTable(report, dataset.teams());
      json["ratios"] = MonotoneRatioToJson(report, dataset.teams());
    } else {
      table += "\nratio check skipped: rankings differ across epsilon\n";
      json["ratios"] = nullptr;
    }
  }
  Emit(out, table, json);
  return 0;
}

int RunMap(const DataOptions& data, const OutputOptions& out,
           const ModelOptions& m, double shape, std::optional<double> rate) {
  const Dataset dataset = Load(data);
  const Normalization normalization = ResolveNormalization(m.normalization, dataset);
  MapPriorSpec prior{shape, rate};
  const FitResult fit = FitMapEm(dataset, prior, ResolveSolver(m), normalization);
  RequireConverged(fit);
  Json json = FitResultToJson(fit);
  json["prior"] = {{"shape", shape}, {"rate", prior.ResolvedRate(dataset.num_teams())}};
  Emit(out,
       fmt::format("prior shape {}  rate {}\n", FormatNumber(shape),
                   FormatNumber(prior.ResolvedRate(dataset.num_teams()))) +
           FitTable(fit),
       json);
  return 0;
}

int RunSeeds(const DataOptions& data, const OutputOptions& out,
             const ModelOptions& m, const std::string& divisions,
             const std::string& key, int seeds, int winners) {
  const Dataset dataset = Load(data);
  const LeagueStructure league = ParseLeagueStructure(ReadFile(divisions));
  std::map<std::string, double> keys;
  std::optional<FitResult> fit;
  if (key == "pct") {
    keys = WinningPercentages(dataset);
  } else {
    const double eps = ResolveEpsilon(m.epsilon, dataset.num_teams());
    fit = RequireConverged(Fit(ResolveSpec(m, dataset, eps), dataset, ResolveSolver(m)));
    keys = MeritKeys(*fit);
  }
  const auto selected = SelectSeeds(keys, league, seeds, winners);
  Json json;
  json["key"] = key;
  json["seeds"] = SeedsToJson(selected);
  if (fit) json["fit"] = FitResultToJson(*fit);
  Emit(out, SeedsTable(selected), json);
  return 0;
}

int RunSimulate(const OutputOptions& out, const std::string& t_grid,
                int replicas, std::uint64_t seed, int games_per_pair) {
  ConsistencyConfig config;
  for (double t : ParseList(t_grid)) {
    if (t != std::floor(t)) throw ConfigError(fmt::format("t = {} is not an integer", t));
    config.t_grid.push_back(static_cast<int>(t));
  }
  config.replicas = replicas;
  config.seed = seed;
  config.games_per_pair = games_per_pair;
  const ConsistencyReport report = RunConsistency(config, out.jobs);
  Emit(out, ConsistencyTable(report), ConsistencyToJson(report));
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Rank teams from paired-comparison data"};
  app.require_subcommand(1);

  const std::uint64_t default_seed = DefaultSeed();
  DataOptions data;
  OutputOptions out;
  ModelOptions m;
  m.seed = default_seed;

  std::vector<std::string> require;
  auto* check = app.add_subcommand("check", "Existence conditions A, B and C");
  AddDataFlags(check, data);
  AddOutputFlags(check, out);
  check->add_option("--require", require,
                    "Conditions that must pass (default: all applicable)")
      ->delimiter(',')
      ->check(CLI::IsMember({"A", "B", "C"}));

  auto* fit = app.add_subcommand("fit", "Penalized maximum likelihood fit");
  AddDataFlags(fit, data);
  AddOutputFlags(fit, out);
  AddModelFlags(fit, m);

  std::string epsilons;
  bool ratios = false;
  auto* sweep = app.add_subcommand("sweep", "Fit over a list of epsilons");
  AddDataFlags(sweep, data);
  AddOutputFlags(sweep, out);
  AddModelFlags(sweep, m, false);
  sweep->add_option("--epsilons", epsilons, "Comma-separated epsilons")->required();
  sweep->add_flag("--ratios", ratios, "Report merit-ratio monotonicity");

  double shape = 1.1;
  std::optional<double> rate;
  ModelOptions map_options;
  map_options.normalization = "simplex";
  map_options.seed = default_seed;
  auto* map = app.add_subcommand("map", "Bayesian MAP estimate by EM");
  AddDataFlags(map, data);
  AddOutputFlags(map, out);
  map->add_option("--shape", shape, "Gamma prior shape d (>= 1)");
  map->add_option("--rate", rate, "Gamma prior rate b (default d*t-1)");
  map->add_option("--normalization", map_options.normalization,
                  "simplex or reference[:TEAM]");
  map->add_option("--grad-tol", map_options.grad_tol, "Gradient tolerance")
      ->check(CLI::PositiveNumber);
  map->add_option("--max-iters", map_options.max_iters, "Iteration budget")
      ->check(CLI::PositiveNumber);

  std::string divisions, key = "merit";
  int seeds_per_conference = 6, division_winners = 4;
  auto* seeds = app.add_subcommand("seeds", "Playoff seeds per conference");
  AddDataFlags(seeds, data);
  AddOutputFlags(seeds, out);
  AddModelFlags(seeds, m);
  seeds->add_option("--divisions", divisions, "League structure JSON")->required();
  seeds->add_option("--key", key, "merit or pct")
      ->check(CLI::IsMember({"merit", "pct"}));
  seeds->add_option("--seeds", seeds_per_conference, "Seeds per conference");
  seeds->add_option("--division-winners", division_winners,
                    "Divisions per conference");

  std::string t_grid = "20,50,100";
  int replicas = 50, games_per_pair = 4;
  std::uint64_t sim_seed = default_seed;
  auto* simulate = app.add_subcommand("simulate", "Round-robin consistency experiment");
  AddOutputFlags(simulate, out);
  simulate->add_option("--t-grid", t_grid, "Comma-separated team counts");
  simulate->add_option("--replicas", replicas, "Replicas per team count");
  simulate->add_option("--seed", sim_seed, "Seed (env BTRANK_SEED)");
  simulate->add_option("--games-per-pair", games_per_pair, "Games per pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorFamily::kConfig);
  }

  if (*check) return RunCheck(data, out, require);
  if (*fit) return RunFit(data, out, m);
  if (*sweep) return RunSweep(data, out, m, epsilons, ratios);
  if (*map) return RunMap(data, out, map_options, shape, rate);
  if (*seeds) {
    return RunSeeds(data, out, m, divisions, key, seeds_per_conference,
                    division_winners);
  }
  return RunSimulate(out, t_grid, replicas, sim_seed, games_per_pair);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Main(argc, argv);
  } catch (const btrank::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << fmt::format("iterations {}, gradient {:.3e}\n",
                             e.result().iterations, e.result().gradient_sup_norm);
    return static_cast<int>(e.family());
  } catch (const btrank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.family());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(btrank::ErrorFamily::kConfig);
  }
}
