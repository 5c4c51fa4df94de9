#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swarmctl/swarmctl.hpp"

using namespace swarmctl;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 (std::string("swarmctl_cli_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + std::string(SWARMCTL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string write_collision_scenario(const fs::path& dir, int horizon = 30) {
  ScenarioSpec s;
  s.task = Task::collision_avoidance;
  s.n_agents = 4;
  s.sensing_radius = 20.0;
  s.map_half_extent = 10.0;
  s.ring_radius = 5.0;
  s.horizon_steps = horizon;
  s.param_bounds = {-2.0, 2.0};
  s.cost_terms = collision_cost_terms();
  std::string path = (dir / "collision.json").string();
  save_scenario(s, path);
  return path;
}

std::string write_flocking_scenario(const fs::path& dir) {
  ScenarioSpec s;
  s.task = Task::flocking;
  s.n_agents = 4;
  s.sensing_radius = 4.0;
  s.horizon_steps = 20;
  std::string path = (dir / "flocking.json").string();
  save_scenario(s, path);
  return path;
}

std::string write_goal_controller(const fs::path& dir, double gain = 1.0) {
  ControllerSpec c;
  c.params = {{gain}};
  c.scalar_exprs = {{ScalarSource::constant, {}}};
  c.vector_exprs = {{VectorSource::unit_to_goal, false}};
  c.vmax = 2.0;
  std::string path = (dir / "controller.json").string();
  save_controller(c, path);
  return path;
}

std::string write_origin_controller(const fs::path& dir) {
  ControllerSpec c;
  c.params = {{1.0}};
  c.scalar_exprs = {{ScalarSource::constant, {}}};
  c.vector_exprs = {{VectorSource::unit_to_origin, false}};
  c.vmax = 2.0;
  std::string path = (dir / "origin_controller.json").string();
  save_controller(c, path);
  return path;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("run --help"), 0);
  EXPECT_EQ(run_cli("plot --help"), 0);
}

TEST(Cli, MissingSubcommandOrArgsExitTwo) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("run"), 2);                       // required options missing
  EXPECT_EQ(run_cli("frobnicate --x 1"), 2);          // unknown subcommand
}

TEST(Cli, RunProducesCompleteArtifacts) {
  fs::path dir = test_dir();
  std::string scenario = write_collision_scenario(dir);
  std::string controller = write_goal_controller(dir);
  fs::path out = dir / "out";
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller +
                    " --seed 1 --out " + out.string()),
            0);

  for (const char* name :
       {"trajectory.csv", "cost_per_step.csv", "cost_report.json", "metrics.json",
        "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }

  // ring start, radial drive at speed 1: nobody reaches a goal or a
  // collision in 30 steps, so the cost is 4 agents over 30 ticks
  auto cost = nlohmann::json::parse(slurp(out / "cost_report.json"));
  EXPECT_DOUBLE_EQ(cost["total"].get<double>(), 120.0);
  EXPECT_DOUBLE_EQ(cost["per_term"]["proximity"].get<double>(), 0.0);

  auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["command"], "run");
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_EQ(manifest["horizon_steps"], 30);
  EXPECT_EQ(manifest["scenario"]["task"], "collision_avoidance");
  ASSERT_TRUE(manifest["outputs"].is_array());
  EXPECT_EQ(manifest["outputs"].size(), 5u);
  std::string text = slurp(out / "manifest.json");
  EXPECT_EQ(text.find("time"), std::string::npos);
  EXPECT_EQ(text.find("date"), std::string::npos);

  CsvTable traj = read_csv((out / "trajectory.csv").string());
  EXPECT_EQ(traj.rows.size(), 4u * 30u);
  EXPECT_GE(traj.column("step_cost"), 0);
}

TEST(Cli, RunWithoutCostTermsSkipsCostArtifacts) {
  fs::path dir = test_dir();
  std::string scenario = write_flocking_scenario(dir);
  std::string controller = write_origin_controller(dir);
  fs::path out = dir / "out";
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller + " --out " +
                    out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(out / "metrics.json"));
  EXPECT_FALSE(fs::exists(out / "cost_report.json"));
  EXPECT_FALSE(fs::exists(out / "cost_per_step.csv"));
  CsvTable traj = read_csv((out / "trajectory.csv").string());
  EXPECT_EQ(traj.column("step_cost"), -1);
}

TEST(Cli, HorizonOverrideAndSeedSensitivity) {
  fs::path dir = test_dir();
  std::string scenario = write_flocking_scenario(dir);
  std::string controller = write_origin_controller(dir);
  fs::path out1 = dir / "h5";
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller +
                    " --horizon 5 --seed 3 --out " + out1.string()),
            0);
  CsvTable traj = read_csv((out1 / "trajectory.csv").string());
  EXPECT_EQ(traj.rows.size(), 4u * 5u);
  auto manifest = nlohmann::json::parse(slurp(out1 / "manifest.json"));
  EXPECT_EQ(manifest["horizon_steps"], 5);

  fs::path out2 = dir / "seed4";
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller +
                    " --horizon 5 --seed 4 --out " + out2.string()),
            0);
  EXPECT_NE(slurp(out1 / "trajectory.csv"), slurp(out2 / "trajectory.csv"));

  EXPECT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller +
                    " --horizon 0 --out " + (dir / "h0").string()),
            2);
}

TEST(Cli, RepeatRunsAreByteIdentical) {
  fs::path dir = test_dir();
  std::string scenario = write_collision_scenario(dir, 20);
  std::string controller = write_goal_controller(dir);
  fs::path out1 = dir / "a";
  fs::path out2 = dir / "b";
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller +
                    " --seed 7 --out " + out1.string()),
            0);
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller +
                    " --seed 7 --out " + out2.string()),
            0);
  for (const char* name :
       {"trajectory.csv", "cost_per_step.csv", "cost_report.json", "metrics.json",
        "manifest.json"}) {
    EXPECT_EQ(slurp(out1 / name), slurp(out2 / name)) << name;
  }
}

TEST(Cli, OptimizeProducesCampaignAndTunedController) {
  fs::path dir = test_dir();
  std::string scenario = write_collision_scenario(dir, 10);
  std::string controller = write_goal_controller(dir, 0.0);
  fs::path out = dir / "out";
  ASSERT_EQ(run_cli("optimize --scenario " + scenario + " --controller " + controller +
                    " --budget 6 --n-init 3 --seed 2 --out " + out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "campaign.csv"));
  EXPECT_TRUE(fs::exists(out / "best_controller.json"));

  CsvTable campaign = read_csv((out / "campaign.csv").string());
  EXPECT_EQ(campaign.rows.size(), 6u);
  EXPECT_GE(campaign.column("param_0"), 0);

  ControllerSpec tuned = load_controller((out / "best_controller.json").string());
  EXPECT_EQ(tuned.params.size(), 1u);

  auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["command"], "optimize");
  EXPECT_EQ(manifest["budget"], 6);
  EXPECT_TRUE(manifest.contains("eval_seed"));
  EXPECT_TRUE(manifest.contains("search_seed"));
  EXPECT_TRUE(manifest.contains("incumbent_cost"));

  // incumbent cost in the manifest matches the campaign minimum
  double best = 1e300;
  int cost_col = campaign.column("cost");
  for (std::size_t r = 0; r < campaign.rows.size(); ++r) {
    best = std::min(best, csv_double(campaign, "campaign.csv", r, cost_col));
  }
  EXPECT_DOUBLE_EQ(manifest["incumbent_cost"].get<double>(), best);
}

TEST(Cli, OptimizeRejectsDegenerateBudgets) {
  fs::path dir = test_dir();
  std::string scenario = write_collision_scenario(dir, 5);
  std::string controller = write_goal_controller(dir);
  EXPECT_EQ(run_cli("optimize --scenario " + scenario + " --controller " + controller +
                    " --budget 3 --n-init 3 --out " + (dir / "o").string()),
            2);
  EXPECT_EQ(run_cli("optimize --scenario " + scenario + " --controller " + controller +
                    " --budget 5 --n-init 1 --out " + (dir / "o").string()),
            2);
}

TEST(Cli, MontecarloArtifactsAndThreadInvariance) {
  fs::path dir = test_dir();
  std::string scenario = write_collision_scenario(dir, 10);
  std::string controller = write_goal_controller(dir);
  fs::path out1 = dir / "t1";
  fs::path out2 = dir / "t4";
  ASSERT_EQ(run_cli("montecarlo --scenario " + scenario + " --controller " + controller +
                        " --trials 12 --bins 6 --seed 5 --out " + out1.string(),
                    "SWARMCTL_THREADS=1 "),
            0);
  ASSERT_EQ(run_cli("montecarlo --scenario " + scenario + " --controller " + controller +
                        " --trials 12 --bins 6 --seed 5 --out " + out2.string(),
                    "SWARMCTL_THREADS=4 "),
            0);

  EXPECT_EQ(slurp(out1 / "trials.csv"), slurp(out2 / "trials.csv"));
  EXPECT_EQ(slurp(out1 / "histogram.csv"), slurp(out2 / "histogram.csv"));
  EXPECT_EQ(slurp(out1 / "manifest.json"), slurp(out2 / "manifest.json"));

  CsvTable trials = read_csv((out1 / "trials.csv").string());
  EXPECT_EQ(trials.rows.size(), 12u);
  CsvTable hist = read_csv((out1 / "histogram.csv").string());
  EXPECT_EQ(hist.rows.size(), 6u);
  double total = 0.0;
  for (std::size_t r = 0; r < hist.rows.size(); ++r) {
    total += csv_double(hist, "histogram.csv", r, hist.column("count"));
  }
  EXPECT_EQ(total, 12.0);

  EXPECT_EQ(run_cli("montecarlo --scenario " + scenario + " --controller " + controller +
                    " --trials 0 --out " + (dir / "bad").string()),
            2);
}

TEST(Cli, PlotRendersEveryKind) {
  fs::path dir = test_dir();
  std::string scenario = write_collision_scenario(dir, 10);
  std::string controller = write_goal_controller(dir);
  fs::path run_out = dir / "run";
  fs::path mc_out = dir / "mc";
  fs::path opt_out = dir / "opt";
  ASSERT_EQ(run_cli("run --scenario " + scenario + " --controller " + controller + " --out " +
                    run_out.string()),
            0);
  ASSERT_EQ(run_cli("montecarlo --scenario " + scenario + " --controller " + controller +
                    " --trials 10 --bins 5 --out " + mc_out.string()),
            0);
  ASSERT_EQ(run_cli("optimize --scenario " + scenario + " --controller " + controller +
                    " --budget 5 --n-init 2 --out " + opt_out.string()),
            0);

  fs::path traj_svg = dir / "traj.svg";
  ASSERT_EQ(run_cli("plot --input " + (run_out / "trajectory.csv").string() +
                    " --kind trajectory --scenario " + scenario + " --out " + traj_svg.string()),
            0);
  std::string svg = slurp(traj_svg);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);

  fs::path hist_svg = dir / "hist.svg";
  ASSERT_EQ(run_cli("plot --input " + (mc_out / "histogram.csv").string() +
                    " --kind histogram --marker 400 --out " + hist_svg.string()),
            0);
  std::string hsvg = slurp(hist_svg);
  EXPECT_NE(hsvg.find("<rect"), std::string::npos);
  EXPECT_NE(hsvg.find("<path"), std::string::npos);

  fs::path conv_svg = dir / "conv.svg";
  ASSERT_EQ(run_cli("plot --input " + (opt_out / "campaign.csv").string() +
                    " --kind convergence --out " + conv_svg.string()),
            0);
  EXPECT_NE(slurp(conv_svg).find("<polyline"), std::string::npos);

  EXPECT_EQ(run_cli("plot --input " + (run_out / "trajectory.csv").string() +
                    " --kind piechart --out " + (dir / "x.svg").string()),
            2);
}

TEST(Cli, ConfigProblemsExitTwoRuntimeFailuresExitThree) {
  fs::path dir = test_dir();
  std::string controller = write_origin_controller(dir);
  std::string scenario = write_flocking_scenario(dir);

  EXPECT_EQ(run_cli("run --scenario " + (dir / "nope.json").string() + " --controller " +
                    controller + " --out " + (dir / "o").string()),
            2);

  std::string broken = (dir / "broken.json").string();
  {
    std::ofstream out(broken, std::ios::binary);
    out << "{ not json";
  }
  EXPECT_EQ(run_cli("run --scenario " + broken + " --controller " + controller + " --out " +
                    (dir / "o").string()),
            2);

  // structurally valid JSON with an invalid controller shape
  std::string bad_controller = (dir / "bad_controller.json").string();
  {
    nlohmann::json j = controller_to_json(load_controller(controller));
    j["params"] = {{1.0, 2.0}};
    std::ofstream out(bad_controller, std::ios::binary);
    out << j.dump(2) << "\n";
  }
  EXPECT_EQ(run_cli("run --scenario " + scenario + " --controller " + bad_controller + " --out " +
                    (dir / "o").string()),
            2);

  // valid config whose evaluation blows up mid-simulation
  std::string unstable = (dir / "unstable.json").string();
  {
    ControllerSpec c;
    c.params = {{1e308}};
    c.scalar_exprs = {{ScalarSource::constant, {{TransformOp::scale, 1e30}}}};
    c.vector_exprs = {{VectorSource::unit_to_origin, false}};
    c.vmax = 2.0;
    save_controller(c, unstable);
  }
  EXPECT_EQ(run_cli("run --scenario " + scenario + " --controller " + unstable + " --horizon 3" +
                    " --out " + (dir / "o").string()),
            3);
}
