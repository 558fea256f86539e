#include "slip/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace slip {

AlignmentResult align_point_sets(std::span<const Vec3> from,
                                 std::span<const Vec3> to) {
  if (from.size() != to.size()) {
    throw std::invalid_argument("align_point_sets: size mismatch");
  }
  const std::size_t n = from.size();
  if (n < 3) {
    throw std::invalid_argument(
        "align_point_sets: need at least 3 matched pairs, got " +
        std::to_string(n));
  }
  Vec3 c_from = Vec3::Zero();
  Vec3 c_to = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    c_from += from[i];
    c_to += to[i];
  }
  c_from /= static_cast<double>(n);
  c_to /= static_cast<double>(n);

  Mat3 cross = Mat3::Zero();
  double spread = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 df = from[i] - c_from;
    cross += (to[i] - c_to) * df.transpose();
    spread += df.squaredNorm();
  }
  cross /= static_cast<double>(n);

  Eigen::JacobiSVD<Mat3> svd(cross,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  // Two vanishing singular values mean the points lie on a line; the
  // rotation about that line is unobservable.
  const double scale = std::max(sv(0), std::sqrt(spread) + 1e-300);
  if (sv(1) <= 1e-9 * scale) {
    throw std::invalid_argument(
        "align_point_sets: degenerate (collinear) geometry");
  }
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  AlignmentResult out;
  out.rot = svd.matrixU() * d * svd.matrixV().transpose();
  out.trans = c_to - out.rot * c_from;
  return out;
}

AlignmentResult align_rigid(const Trajectory& estimate,
                            const Trajectory& truth) {
  const MatchedPairs matched = match_trajectories(estimate, truth);
  std::vector<Vec3> from;
  std::vector<Vec3> to;
  from.reserve(matched.pairs.size());
  to.reserve(matched.pairs.size());
  for (const auto& [ei, ti] : matched.pairs) {
    from.push_back(estimate.states[ei].p);
    to.push_back(truth.states[ti].p);
  }
  return align_point_sets(from, to);
}

ErrorReport compute_errors(const Trajectory& estimate, const Trajectory& truth,
                           const AlignmentResult& alignment) {
  const MatchedPairs matched = match_trajectories(estimate, truth);
  if (matched.pairs.empty()) {
    throw std::invalid_argument("compute_errors: no matched pairs");
  }
  ErrorReport report;
  report.dropped = matched.dropped;
  double sum_sq = 0.0;
  Vec3 sum_axis_sq = Vec3::Zero();
  for (const auto& [ei, ti] : matched.pairs) {
    const Vec3 err =
        alignment.apply(estimate.states[ei].p) - truth.states[ti].p;
    report.per_sample_errors.emplace_back(estimate.states[ei].t, err);
    sum_sq += err.squaredNorm();
    sum_axis_sq += err.cwiseAbs2();
  }
  const double n = static_cast<double>(matched.pairs.size());
  report.count = matched.pairs.size();
  report.rmse = std::sqrt(sum_sq / n);
  report.per_axis_rmse = (sum_axis_sq / n).cwiseSqrt();
  return report;
}

double improvement_percent(double base_rmse, double new_rmse) {
  if (!(base_rmse > 0.0)) {
    throw std::invalid_argument("improvement_percent: base rmse must be > 0");
  }
  return 100.0 * (base_rmse - new_rmse) / base_rmse;
}

void write_error_report(const std::filesystem::path& path,
                        const ErrorReport& report) {
  std::string text = "# slip-errors v1 cols=t,ex,ey,ez\n";
  for (const auto& [t, e] : report.per_sample_errors) {
    text += detail::format_fixed9(t);
    for (const double v : {e.x(), e.y(), e.z()}) {
      text += ',';
      text += detail::format_double(v);
    }
    text += '\n';
  }
  detail::atomic_write(path, text);
}

void write_error_summary(const std::filesystem::path& path,
                         const ErrorReport& report) {
  std::string text;
  text += "rmse=" + detail::format_double(report.rmse) + "\n";
  text += "rmse_x=" + detail::format_double(report.per_axis_rmse.x()) + "\n";
  text += "rmse_y=" + detail::format_double(report.per_axis_rmse.y()) + "\n";
  text += "rmse_z=" + detail::format_double(report.per_axis_rmse.z()) + "\n";
  text += "count=" + std::to_string(report.count) + "\n";
  text += "dropped=" + std::to_string(report.dropped) + "\n";
  detail::atomic_write(path, text);
}

}  // namespace slip
