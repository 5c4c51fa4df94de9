// Command-line front end: simulate a scenario, tune a controller, run the
// random-search baseline, and render CSV artifacts to SVG.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "swarmctl/swarmctl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Tag mixed into --seed to derive the fixed per-campaign evaluation seed.
constexpr std::uint64_t kEvalSeedStream = 0xE7A1;
constexpr std::uint64_t kSearchSeedStream = 0xB0;

int resolve_threads(int trials) {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
  if (const char* env = std::getenv("SWARMCTL_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      // unparseable value: keep the default
    }
  }
  return std::min(n, std::max(trials, 1));
}

json base_manifest(const std::string& command, std::uint64_t seed,
                   const swarmctl::ScenarioSpec& scenario, const swarmctl::ControllerSpec& spec) {
  json m;
  m["tool"] = "swarmctl";
  m["version"] = swarmctl::kVersion;
  m["command"] = command;
  m["seed"] = seed;
  m["scenario"] = swarmctl::scenario_to_json(scenario);
  m["controller"] = swarmctl::controller_to_json(spec);
  return m;
}

struct RunArgs {
  std::string scenario_path;
  std::string controller_path;
  std::uint64_t seed = 1;
  std::optional<int> horizon;
  std::string out_dir = "out";
};

int cmd_run(const RunArgs& args) {
  swarmctl::ScenarioSpec scenario = swarmctl::load_scenario(args.scenario_path);
  swarmctl::ControllerSpec spec = swarmctl::load_controller(args.controller_path);
  int horizon = args.horizon.value_or(scenario.horizon_steps);
  if (horizon < 1) throw swarmctl::ConfigError("run: --horizon must be >= 1");

  swarmctl::Trajectory traj = swarmctl::run(scenario, spec, args.seed, horizon);

  fs::create_directories(args.out_dir);
  auto path = [&](const char* name) { return (fs::path(args.out_dir) / name).string(); };

  json manifest = base_manifest("run", args.seed, scenario, spec);
  manifest["horizon_steps"] = horizon;
  std::vector<std::string> outputs = {"trajectory.csv", "metrics.json", "manifest.json"};

  if (scenario.cost_terms.empty()) {
    swarmctl::write_trajectory_csv(path("trajectory.csv"), traj);
  } else {
    swarmctl::CostReport report = swarmctl::accumulate_cost(traj, scenario);
    swarmctl::write_trajectory_csv(path("trajectory.csv"), traj, &report.per_step);
    swarmctl::write_cost_steps_csv(path("cost_per_step.csv"), report);
    json cost;
    cost["total"] = report.total;
    cost["per_term"] = report.per_term;
    swarmctl::save_json(cost, path("cost_report.json"));
    outputs.push_back("cost_per_step.csv");
    outputs.push_back("cost_report.json");
  }

  json metrics = swarmctl::behavior_metrics(traj, scenario);
  swarmctl::save_json(metrics, path("metrics.json"));

  std::sort(outputs.begin(), outputs.end());
  manifest["outputs"] = outputs;
  swarmctl::save_json(manifest, path("manifest.json"));
  std::cout << "run: " << horizon << " steps, artifacts in " << args.out_dir << "\n";
  return kExitOk;
}

struct OptimizeArgs {
  std::string scenario_path;
  std::string controller_path;
  int budget = 150;
  int n_init = 30;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

int cmd_optimize(const OptimizeArgs& args) {
  swarmctl::ScenarioSpec scenario = swarmctl::load_scenario(args.scenario_path);
  swarmctl::ControllerSpec tmpl = swarmctl::load_controller(args.controller_path);
  if (args.n_init < 2) throw swarmctl::ConfigError("optimize: --n-init must be >= 2");
  if (args.budget <= args.n_init)
    throw swarmctl::ConfigError("optimize: --budget must exceed --n-init");

  const std::uint64_t eval_seed = swarmctl::Rng::derive(args.seed, kEvalSeedStream);
  const std::uint64_t search_seed = swarmctl::Rng::derive(args.seed, kSearchSeedStream);
  swarmctl::BOCampaign campaign =
      swarmctl::run_bo(scenario, tmpl, args.budget, args.n_init, search_seed, eval_seed);

  const swarmctl::Evaluation& best = campaign.incumbent();
  swarmctl::ControllerSpec tuned = swarmctl::with_params(
      tmpl, std::span<const double>(best.params.data(), best.params.size()));

  fs::create_directories(args.out_dir);
  auto path = [&](const char* name) { return (fs::path(args.out_dir) / name).string(); };
  swarmctl::write_campaign_csv(path("campaign.csv"), campaign);
  swarmctl::save_controller(tuned, path("best_controller.json"));

  json manifest = base_manifest("optimize", args.seed, scenario, tmpl);
  manifest["budget"] = args.budget;
  manifest["n_init"] = args.n_init;
  manifest["eval_seed"] = eval_seed;
  manifest["search_seed"] = search_seed;
  manifest["incumbent_cost"] = best.cost;
  manifest["outputs"] = {"best_controller.json", "campaign.csv", "manifest.json"};
  swarmctl::save_json(manifest, path("manifest.json"));
  std::cout << "optimize: " << args.budget << " evaluations, incumbent cost "
            << swarmctl::format_double(best.cost) << ", artifacts in " << args.out_dir << "\n";
  return kExitOk;
}

struct MonteCarloArgs {
  std::string scenario_path;
  std::string controller_path;
  int trials = 1000;
  int bins = 50;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

int cmd_montecarlo(const MonteCarloArgs& args) {
  swarmctl::ScenarioSpec scenario = swarmctl::load_scenario(args.scenario_path);
  swarmctl::ControllerSpec tmpl = swarmctl::load_controller(args.controller_path);
  if (args.trials < 1) throw swarmctl::ConfigError("montecarlo: --trials must be >= 1");
  if (args.bins < 1) throw swarmctl::ConfigError("montecarlo: --bins must be >= 1");

  const std::uint64_t eval_seed = swarmctl::Rng::derive(args.seed, kEvalSeedStream);
  const std::uint64_t search_seed = swarmctl::Rng::derive(args.seed, kSearchSeedStream);
  const int threads = resolve_threads(args.trials);
  swarmctl::RandomSearchResult result = swarmctl::run_random_search(
      scenario, tmpl, args.trials, search_seed, eval_seed, threads, args.bins);

  fs::create_directories(args.out_dir);
  auto path = [&](const char* name) { return (fs::path(args.out_dir) / name).string(); };
  swarmctl::write_trials_csv(path("trials.csv"), result);
  swarmctl::write_histogram_csv(path("histogram.csv"), result.histogram);

  json manifest = base_manifest("montecarlo", args.seed, scenario, tmpl);
  manifest["trials"] = args.trials;
  manifest["bins"] = args.bins;
  manifest["eval_seed"] = eval_seed;
  manifest["search_seed"] = search_seed;
  manifest["best_cost"] = result.best().cost;
  manifest["outputs"] = {"histogram.csv", "manifest.json", "trials.csv"};
  swarmctl::save_json(manifest, path("manifest.json"));
  std::cout << "montecarlo: " << args.trials << " trials, best cost "
            << swarmctl::format_double(result.best().cost) << ", artifacts in " << args.out_dir
            << "\n";
  return kExitOk;
}

struct PlotArgs {
  std::string input_path;
  std::string kind;
  std::string out_path = "plot.svg";
  std::string scenario_path;
  std::optional<double> marker;
};

int cmd_plot(const PlotArgs& args) {
  swarmctl::CsvTable table = swarmctl::read_csv(args.input_path);
  if (table.rows.empty())
    throw swarmctl::ConfigError(args.input_path + ": no data rows to plot");
  std::optional<swarmctl::ScenarioSpec> scenario;
  if (!args.scenario_path.empty()) scenario = swarmctl::load_scenario(args.scenario_path);
  if (args.kind == "trajectory") {
    swarmctl::plot_trajectory_svg(table, args.input_path, args.out_path, scenario);
  } else if (args.kind == "histogram") {
    swarmctl::plot_histogram_svg(table, args.input_path, args.out_path, args.marker);
  } else if (args.kind == "convergence") {
    swarmctl::plot_convergence_svg(table, args.input_path, args.out_path);
  } else {
    throw swarmctl::ConfigError("plot: unknown kind '" + args.kind + "'");
  }
  std::cout << "plot: wrote " << args.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarm controller simulation and synthesis toolkit"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "simulate a scenario with a controller");
  run->add_option("--scenario", run_args.scenario_path, "scenario JSON file")->required();
  run->add_option("--controller", run_args.controller_path, "controller JSON file")->required();
  run->add_option("--seed", run_args.seed, "initial placement seed");
  run->add_option("--horizon", run_args.horizon, "override scenario horizon_steps");
  run->add_option("--out", run_args.out_dir, "output directory");

  OptimizeArgs opt_args;
  CLI::App* optimize = app.add_subcommand("optimize", "tune controller parameters");
  optimize->add_option("--scenario", opt_args.scenario_path, "scenario JSON file")->required();
  optimize
      ->add_option("--controller", opt_args.controller_path,
                   "controller JSON file; its parameter matrix shape defines the search space")
      ->required();
  optimize->add_option("--budget", opt_args.budget, "total evaluation budget");
  optimize->add_option("--n-init", opt_args.n_init, "initial space-filling evaluations");
  optimize->add_option("--seed", opt_args.seed, "campaign seed");
  optimize->add_option("--out", opt_args.out_dir, "output directory");

  MonteCarloArgs mc_args;
  CLI::App* montecarlo = app.add_subcommand("montecarlo", "uniform random-search baseline");
  montecarlo->add_option("--scenario", mc_args.scenario_path, "scenario JSON file")->required();
  montecarlo
      ->add_option("--controller", mc_args.controller_path,
                   "controller JSON file; its parameter matrix shape defines the search space")
      ->required();
  montecarlo->add_option("--trials", mc_args.trials, "number of random trials");
  montecarlo->add_option("--bins", mc_args.bins, "histogram bin count");
  montecarlo->add_option("--seed", mc_args.seed, "campaign seed");
  montecarlo->add_option("--out", mc_args.out_dir, "output directory");

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "render a CSV artifact to SVG");
  plot->add_option("--input", plot_args.input_path, "CSV file to plot")->required();
  plot->add_option("--kind", plot_args.kind, "trajectory, histogram, or convergence")->required();
  plot->add_option("--out", plot_args.out_path, "output SVG file");
  plot->add_option("--scenario", plot_args.scenario_path,
                   "scenario JSON for fixed markers (trajectory kind)");
  plot->add_option("--marker", plot_args.marker, "cost to highlight (histogram kind)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (optimize->parsed()) return cmd_optimize(opt_args);
    if (montecarlo->parsed()) return cmd_montecarlo(mc_args);
    if (plot->parsed()) return cmd_plot(plot_args);
  } catch (const swarmctl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const swarmctl::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
