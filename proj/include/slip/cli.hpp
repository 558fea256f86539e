#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "slip/evaluation.hpp"
#include "slip/simulator.hpp"

namespace slip::cli {

/// Reads a truth file in either exchange format, sniffed from the header:
/// native trajectory files start with `# slip-traj v1`, anything else is
/// parsed as EuRoC-style ground truth.
Trajectory read_truth_any(const std::filesystem::path& path);

struct SimulateConfig {
  std::filesystem::path scenario;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::optional<double> rate_hz;    ///< overrides the scenario rate
  std::optional<double> gravity_z;  ///< overrides gravity as [0, 0, z]
};

struct SimulateResult {
  std::filesystem::path imu_path;
  std::filesystem::path truth_path;
  std::size_t n_samples = 0;
  std::size_t n_states = 0;
};

SimulateResult cmd_simulate(const SimulateConfig& cfg);

struct IntegrateConfig {
  std::filesystem::path imu;
  std::filesystem::path out_dir;
  Model model = Model::kProposed;
  double keyframe_hz = 10.0;
  std::optional<std::filesystem::path> truth;  ///< initial state source
  std::optional<Vec3> p0;  ///< used when no truth file is given
  std::optional<Vec3> v0;
  std::optional<double> gravity_z;
};

struct IntegrateResult {
  std::filesystem::path estimate_path;
  std::size_t n_keyframes = 0;
};

/// Dead-reckons the IMU log between keyframes with the selected model and
/// writes the estimated trajectory at the keyframe instants.
IntegrateResult cmd_integrate(const IntegrateConfig& cfg);

struct CompareConfig {
  std::filesystem::path imu;
  std::filesystem::path truth;
  std::filesystem::path out_dir;
  double reset_every = 0.0;  ///< s between ground-truth resets; 0 = never
  double keyframe_hz = 10.0;
  std::optional<double> gravity_z;
};

struct WindowStats {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t count = 0;  ///< matched evaluation instants
  double rmse_classical = 0.0;
  double rmse_proposed = 0.0;
};

struct CompareResult {
  std::vector<WindowStats> windows;
  std::size_t dropped_windows = 0;  ///< no truth state at the reset instant
  double median_rmse_classical = 0.0;
  double median_rmse_proposed = 0.0;
  double improvement_pct = 0.0;  ///< classical -> proposed, on the medians
};

/// Runs both models over the same log, reinitializing from ground truth
/// every reset_every seconds, and reports per-window position RMSE in the
/// shared world frame (windows start exactly on truth, so no alignment is
/// applied).
CompareResult cmd_compare(const CompareConfig& cfg);

struct EvaluateConfig {
  std::filesystem::path estimate;
  std::filesystem::path truth;
  std::filesystem::path out_dir;
};

struct EvaluateResult {
  AlignmentResult alignment;
  ErrorReport report;
};

/// Rigid-aligns the estimate onto truth and writes the error report plus a
/// key=value summary.
EvaluateResult cmd_evaluate(const EvaluateConfig& cfg);

}  // namespace slip::cli
