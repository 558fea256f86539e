#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slip/types.hpp"

namespace slip {

/// EuRoC-style IMU log: `timestamp [ns], wx, wy, wz [rad/s], ax, ay, az
/// [m/s^2]`, comma-delimited, `#` header lines. Timestamps are rebased to
/// `epoch_ns` (default: the first stamp in the file). Malformed rows and
/// non-monotone timestamps are rejected with the offending line number.
ImuStream read_imu_log(const std::filesystem::path& path,
                       std::optional<std::int64_t> epoch_ns = std::nullopt);

void write_imu_log(const std::filesystem::path& path, const ImuStream& imu);

/// EuRoC-style ground truth: `timestamp [ns], px, py, pz [m], qw, qx, qy,
/// qz, vx, vy, vz [m/s], ...`; trailing columns are ignored. Quaternions
/// with |norm - 1| <= 1e-3 are normalized, anything further off is rejected.
Trajectory read_groundtruth(const std::filesystem::path& path,
                            std::optional<std::int64_t> epoch_ns = std::nullopt);

void write_groundtruth(const std::filesystem::path& path,
                       const Trajectory& traj);

/// Native trajectory exchange file: one `#` header line carrying the epoch,
/// then `t, px, py, pz, vx, vy, vz, r11..r33` (row-major body-to-world).
/// Timestamps are printed with 9 fractional digits; the remaining fields use
/// shortest exact round-trip formatting.
Trajectory read_trajectory(const std::filesystem::path& path);

void write_trajectory(const std::filesystem::path& path,
                      const Trajectory& traj);

/// Sample indices nearest to the uniform 1/rate_hz grid anchored at the
/// first sample; the first and last indices are always included. rate_hz
/// must be positive and no faster than the stream itself.
std::vector<std::size_t> select_keyframes(std::span<const ImuSample> samples,
                                          double rate_hz);

struct MatchedPairs {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (a idx, b idx)
  std::size_t dropped = 0;  ///< states of `a` without a partner in `b`
};

/// Nearest-neighbor timestamp association of `a` against `b`; pairs further
/// apart than tol_s are dropped (and counted). Epochs may differ.
MatchedPairs match_trajectories(const Trajectory& a, const Trajectory& b,
                                double tol_s = 1e-3);

namespace detail {
/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);
/// Fixed 9 fractional digits (nanosecond resolution timestamps).
std::string format_fixed9(double v);
/// Writes text to path atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::filesystem::path& path, const std::string& text);
}  // namespace detail

}  // namespace slip
