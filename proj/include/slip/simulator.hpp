#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "slip/preintegration.hpp"

namespace slip {

/// One stretch of piecewise-constant body-frame inputs.
struct SegmentSpec {
  double duration = 0.0;       ///< s, must be an integer number of samples
  Vec3 a_body = Vec3::Zero();  ///< specific force, m/s^2
  Vec3 w_body = Vec3::Zero();  ///< angular rate, rad/s
};

struct NoiseSpec {
  double gyro_std = 0.0;   ///< rad/s, i.i.d. per axis
  double accel_std = 0.0;  ///< m/s^2, i.i.d. per axis
};

struct ScenarioSpec {
  NavState initial;
  std::vector<SegmentSpec> segments;
  double imu_rate_hz = 100.0;
  Vec3 gravity = standard_gravity();
  std::optional<NoiseSpec> noise;

  double total_duration() const;

  /// Throws std::invalid_argument naming the offending field if the rate is
  /// not positive, a segment is empty, or a segment duration is not an
  /// integer multiple of the sample period within 1e-9.
  void validate() const;
};

struct SimResult {
  ImuStream samples;  ///< N samples, one per interval
  Trajectory truth;   ///< N+1 states, interval boundaries
};

/// Ground truth propagated with step_proposed at the IMU rate (exact under
/// the piecewise-constant body-frame assumption) plus the sample stream.
/// Noise, when configured, is additive zero-mean Gaussian on the samples
/// only; the same seed reproduces the stream bit for bit.
SimResult generate(const ScenarioSpec& scenario, std::uint64_t seed);

/// Truth recomputed with every IMU interval split into `substeps` proposed
/// steps (substeps >= 10). States are reported at the same instants as
/// generate(); under piecewise-constant inputs the two must agree.
Trajectory fine_oracle(const ScenarioSpec& scenario, int substeps);

/// Plain-text scenario file, one `key value...` pair per line, `#` comments:
///   imu_rate_hz 100
///   gravity 0 0 -9.81
///   noise_gyro_std 0.001        (optional, requires noise_accel_std)
///   noise_accel_std 0.01
///   initial_t 0
///   initial_p 0 0 0
///   initial_v 0 0 0
///   initial_r 1 0 0 0 1 0 0 0 1 (row-major body-to-world)
///   segment <duration> <ax> <ay> <az> <wx> <wy> <wz>   (repeatable)
/// Unknown keys are rejected.
ScenarioSpec load_scenario(const std::filesystem::path& path);

}  // namespace slip
