#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "slip/cli.hpp"
#include "slip/dataset_io.hpp"

using namespace slip;
using slip::testing::max_abs_diff;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kRotatingScenario =
    "imu_rate_hz 100\n"
    "segment 1.0 1 0 0 0 0 2\n";

const char* kStillScenario =
    "imu_rate_hz 100\n"
    "segment 1.0 0.5 -0.2 9.81 0 0 0\n";

}  // namespace

TEST_CASE("cmd_simulate writes counted, deterministic outputs") {
  TempDir dir("slip_cli_simulate");
  const auto scn =
      write_file(dir.path / "rotating.scn", kRotatingScenario);

  cli::SimulateConfig cfg;
  cfg.scenario = scn;
  cfg.out_dir = dir.path / "out_a";
  const cli::SimulateResult a = cli::cmd_simulate(cfg);
  CHECK(a.n_samples == 100);
  CHECK(a.n_states == 101);
  CHECK(fs::exists(a.imu_path));
  CHECK(fs::exists(a.truth_path));

  cfg.out_dir = dir.path / "out_b";
  const cli::SimulateResult b = cli::cmd_simulate(cfg);
  CHECK(slurp(a.imu_path) == slurp(b.imu_path));
  CHECK(slurp(a.truth_path) == slurp(b.truth_path));
}

TEST_CASE("cmd_simulate rejects a broken rate override") {
  TempDir dir("slip_cli_simulate_bad");
  const auto scn = write_file(dir.path / "rotating.scn", kRotatingScenario);
  cli::SimulateConfig cfg;
  cfg.scenario = scn;
  cfg.out_dir = dir.path / "out";
  cfg.rate_hz = 0.0;
  CHECK_THROWS_WITH_AS(cli::cmd_simulate(cfg),
                       doctest::Contains("imu_rate_hz"),
                       std::invalid_argument);
}

TEST_CASE("cmd_integrate reproduces simulator truth with the proposed model") {
  TempDir dir("slip_cli_integrate");
  const auto scn = write_file(dir.path / "rotating.scn", kRotatingScenario);
  cli::SimulateConfig sim_cfg;
  sim_cfg.scenario = scn;
  sim_cfg.out_dir = dir.path / "sim";
  const auto sim = cli::cmd_simulate(sim_cfg);

  cli::IntegrateConfig cfg;
  cfg.imu = sim.imu_path;
  cfg.truth = sim.truth_path;
  cfg.out_dir = dir.path / "est";
  cfg.keyframe_hz = 10.0;

  cfg.model = Model::kProposed;
  const auto proposed = cli::cmd_integrate(cfg);
  cfg.model = Model::kClassical;
  const auto classical = cli::cmd_integrate(cfg);

  const Trajectory est_p = read_trajectory(proposed.estimate_path);
  const Trajectory est_c = read_trajectory(classical.estimate_path);
  const Trajectory truth = read_trajectory(sim.truth_path);

  double worst_p = 0.0;
  double worst_c = 0.0;
  const MatchedPairs mp = match_trajectories(est_p, truth);
  REQUIRE(mp.pairs.size() == est_p.states.size());
  for (const auto& [ei, ti] : mp.pairs) {
    worst_p = std::max(
        worst_p, (est_p.states[ei].p - truth.states[ti].p).norm());
  }
  const MatchedPairs mc = match_trajectories(est_c, truth);
  for (const auto& [ei, ti] : mc.pairs) {
    worst_c = std::max(
        worst_c, (est_c.states[ei].p - truth.states[ti].p).norm());
  }
  CHECK(worst_p <= 1e-9);   // exact under the generating assumption
  CHECK(worst_c > 1e-5);    // classical visibly drifts on rotation
}

TEST_CASE("cmd_integrate without truth uses flag-provided initial state") {
  TempDir dir("slip_cli_integrate_flags");
  const auto scn = write_file(dir.path / "still.scn", kStillScenario);
  cli::SimulateConfig sim_cfg;
  sim_cfg.scenario = scn;
  sim_cfg.out_dir = dir.path / "sim";
  const auto sim = cli::cmd_simulate(sim_cfg);

  cli::IntegrateConfig cfg;
  cfg.imu = sim.imu_path;
  cfg.model = Model::kProposed;
  cfg.out_dir = dir.path / "est";
  cfg.p0 = Vec3(5, 5, 5);
  const auto res = cli::cmd_integrate(cfg);
  const Trajectory est = read_trajectory(res.estimate_path);
  CHECK(max_abs_diff(est.states.front().p, Vec3(5, 5, 5)) == 0.0);
}

TEST_CASE("cmd_compare separates the models on rotating input") {
  TempDir dir("slip_cli_compare");
  const auto scn = write_file(dir.path / "rotating.scn", kRotatingScenario);
  cli::SimulateConfig sim_cfg;
  sim_cfg.scenario = scn;
  sim_cfg.out_dir = dir.path / "sim";
  const auto sim = cli::cmd_simulate(sim_cfg);

  cli::CompareConfig cfg;
  cfg.imu = sim.imu_path;
  cfg.truth = sim.truth_path;
  cfg.out_dir = dir.path / "cmp";
  const cli::CompareResult res = cli::cmd_compare(cfg);

  CHECK(res.windows.size() == 1);
  CHECK(res.median_rmse_proposed <= 1e-9);
  CHECK(res.median_rmse_classical > 10.0 * res.median_rmse_proposed);
  CHECK(fs::exists(dir.path / "cmp" / "windows.csv"));
  CHECK(fs::exists(dir.path / "cmp" / "summary.txt"));
}

TEST_CASE("cmd_compare reports zero improvement without rotation") {
  TempDir dir("slip_cli_compare_still");
  const auto scn = write_file(dir.path / "still.scn", kStillScenario);
  cli::SimulateConfig sim_cfg;
  sim_cfg.scenario = scn;
  sim_cfg.out_dir = dir.path / "sim";
  const auto sim = cli::cmd_simulate(sim_cfg);

  cli::CompareConfig cfg;
  cfg.imu = sim.imu_path;
  cfg.truth = sim.truth_path;
  cfg.out_dir = dir.path / "cmp";
  cfg.reset_every = 0.25;
  const cli::CompareResult res = cli::cmd_compare(cfg);
  CHECK(res.windows.size() == 4);
  CHECK(std::abs(res.improvement_pct) < 1e-9);
}

TEST_CASE("cmd_evaluate on identity and offset pairs") {
  TempDir dir("slip_cli_evaluate");
  slip::testing::Rng rng(61);
  Trajectory truth;
  for (int i = 0; i < 25; ++i) {
    NavState x = rng.nav_state();
    x.t = i * 0.1;
    truth.states.push_back(x);
  }
  Trajectory offset = truth;
  for (NavState& x : offset.states) x.p += Vec3(1, -2, 3);

  write_trajectory(dir.path / "truth.csv", truth);
  write_trajectory(dir.path / "estimate.csv", offset);

  cli::EvaluateConfig cfg;
  cfg.estimate = dir.path / "estimate.csv";
  cfg.truth = dir.path / "truth.csv";
  cfg.out_dir = dir.path / "eval";
  const cli::EvaluateResult res = cli::cmd_evaluate(cfg);
  // rigid offset is fully removed by the alignment
  CHECK(res.report.rmse < 1e-10);
  CHECK(res.report.dropped == 0);

  const std::string summary = slurp(dir.path / "eval" / "summary.txt");
  CHECK(summary.find("count=25") != std::string::npos);
}

TEST_CASE("cmd_evaluate counts dropped timestamps") {
  TempDir dir("slip_cli_evaluate_drop");
  slip::testing::Rng rng(62);
  Trajectory truth;
  for (int i = 0; i < 20; ++i) {
    NavState x = rng.nav_state();
    x.t = i * 0.1;
    truth.states.push_back(x);
  }
  Trajectory est = truth;
  // push five estimate states far from any truth stamp
  for (int i = 0; i < 5; ++i) {
    NavState x = est.states.back();
    x.t = 100.0 + i;
    est.states.push_back(x);
  }
  write_trajectory(dir.path / "truth.csv", truth);
  write_trajectory(dir.path / "estimate.csv", est);

  cli::EvaluateConfig cfg;
  cfg.estimate = dir.path / "estimate.csv";
  cfg.truth = dir.path / "truth.csv";
  cfg.out_dir = dir.path / "eval";
  const cli::EvaluateResult res = cli::cmd_evaluate(cfg);
  CHECK(res.report.count == 20);
  CHECK(res.report.dropped == 5);
}

TEST_CASE("cmd_compare accepts EuRoC-format ground truth") {
  TempDir dir("slip_cli_compare_euroc");
  const auto scn = write_file(dir.path / "rotating.scn", kRotatingScenario);
  cli::SimulateConfig sim_cfg;
  sim_cfg.scenario = scn;
  sim_cfg.out_dir = dir.path / "sim";
  const auto sim = cli::cmd_simulate(sim_cfg);

  // Re-encode the truth as EuRoC ground truth and compare against that.
  const Trajectory truth = read_trajectory(sim.truth_path);
  write_groundtruth(dir.path / "gt_euroc.csv", truth);

  cli::CompareConfig cfg;
  cfg.imu = sim.imu_path;
  cfg.truth = dir.path / "gt_euroc.csv";
  cfg.out_dir = dir.path / "cmp";
  cfg.reset_every = 0.5;
  const cli::CompareResult res = cli::cmd_compare(cfg);
  CHECK(res.windows.size() == 2);
  CHECK(res.median_rmse_proposed <= res.median_rmse_classical);
}
