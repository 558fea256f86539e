#pragma once

#include <span>

#include "slip/dataset_io.hpp"

namespace slip {

/// Rigid map applied to an estimate to express it in the ground-truth frame.
struct AlignmentResult {
  RotationMatrix rot = Mat3::Identity();
  Vec3 trans = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rot * p + trans; }
};

/// Least-squares rigid registration without scale: the (rot, trans)
/// minimizing sum |rot * from_i + trans - to_i|^2, det(rot) = +1 enforced.
/// Throws std::invalid_argument on fewer than 3 pairs or collinear geometry.
AlignmentResult align_point_sets(std::span<const Vec3> from,
                                 std::span<const Vec3> to);

/// Associates the two trajectories by nearest timestamp (1 ms tolerance) and
/// aligns the estimate positions onto the truth positions.
AlignmentResult align_rigid(const Trajectory& estimate,
                            const Trajectory& truth);

struct ErrorReport {
  double rmse = 0.0;                ///< m, over error-vector norms
  Vec3 per_axis_rmse = Vec3::Zero();
  std::vector<std::pair<double, Vec3>> per_sample_errors;  ///< (t, error)
  std::size_t count = 0;            ///< matched pairs
  std::size_t dropped = 0;          ///< estimate states without a partner
};

/// Per-sample error = aligned estimate position minus truth position at the
/// matched instants.
ErrorReport compute_errors(const Trajectory& estimate, const Trajectory& truth,
                           const AlignmentResult& alignment);

/// 100 * (base - new) / base. Throws std::invalid_argument if base <= 0.
double improvement_percent(double base_rmse, double new_rmse);

/// Per-sample errors as `t, ex, ey, ez` rows under a `#` header.
void write_error_report(const std::filesystem::path& path,
                        const ErrorReport& report);

/// `key=value` lines (rmse, per-axis rmse, count, dropped) for machine
/// consumption.
void write_error_summary(const std::filesystem::path& path,
                         const ErrorReport& report);

}  // namespace slip
