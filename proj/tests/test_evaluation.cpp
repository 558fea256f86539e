#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "slip/evaluation.hpp"

using namespace slip;
using slip::testing::max_abs_diff;
using slip::testing::Rng;

namespace {

Trajectory random_trajectory(Rng& rng, std::size_t n) {
  Trajectory traj;
  for (std::size_t i = 0; i < n; ++i) {
    NavState x = rng.nav_state();
    x.t = static_cast<double>(i) * 0.1;
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory apply_rigid(const Trajectory& traj, const Mat3& rot,
                       const Vec3& trans) {
  Trajectory out = traj;
  for (NavState& x : out.states) {
    x.p = rot * x.p + trans;
    x.R = RotationMatrix(rot * x.R);
  }
  return out;
}

}  // namespace

TEST_CASE("identical trajectories align to the identity") {
  Rng rng(51);
  const Trajectory t = random_trajectory(rng, 20);
  const AlignmentResult a = align_rigid(t, t);
  CHECK(max_abs_diff(a.rot, Mat3::Identity()) < 1e-12);
  CHECK(a.trans.norm() < 1e-12);
  const ErrorReport r = compute_errors(t, t, a);
  CHECK(r.rmse < 1e-12);
  CHECK(r.count == 20);
}

TEST_CASE("align_rigid recovers a constructed rigid map") {
  Rng rng(52);
  const Trajectory truth = random_trajectory(rng, 30);
  const Mat3 rot = exp_so3(Vec3(0, 0, std::numbers::pi / 2));
  const Vec3 trans(1, 2, 3);
  // estimate = rot * truth + trans, so the alignment must invert that map
  const Trajectory estimate = apply_rigid(truth, rot, trans);
  const AlignmentResult a = align_rigid(estimate, truth);
  CHECK(max_abs_diff(a.rot, Mat3(rot.transpose())) < 1e-10);
  CHECK(max_abs_diff(a.trans, Vec3(-rot.transpose() * trans)) < 1e-10);
  const ErrorReport r = compute_errors(estimate, truth, a);
  CHECK(r.rmse < 1e-10);
}

TEST_CASE("recovery over many random rigid maps") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const Trajectory truth = random_trajectory(rng, 12);
    const Mat3 rot = rng.rotation();
    const Vec3 trans = rng.vec_in_ball(20.0);
    const Trajectory estimate = apply_rigid(truth, rot, trans);
    const AlignmentResult a = align_rigid(estimate, truth);
    const ErrorReport r = compute_errors(estimate, truth, a);
    CHECK(r.rmse <= 1e-10);
  }
}

TEST_CASE("alignment never beats the optimum it claims") {
  Rng rng(54);
  Trajectory truth = random_trajectory(rng, 25);
  Trajectory estimate = truth;
  // perturb the estimate so there is genuine residual error
  for (NavState& x : estimate.states) x.p += rng.vec_in_ball(0.05);
  estimate = apply_rigid(estimate, rng.rotation(), rng.vec_in_ball(4.0));

  const AlignmentResult a = align_rigid(estimate, truth);
  const ErrorReport aligned = compute_errors(estimate, truth, a);
  const ErrorReport unaligned =
      compute_errors(estimate, truth, AlignmentResult{});
  CHECK(aligned.rmse <= unaligned.rmse + 1e-12);
}

TEST_CASE("alignment invariance of the error report") {
  Rng rng(55);
  Trajectory truth = random_trajectory(rng, 25);
  Trajectory estimate = truth;
  for (NavState& x : estimate.states) x.p += rng.vec_in_ball(0.05);

  const ErrorReport base =
      compute_errors(estimate, truth, align_rigid(estimate, truth));
  for (int i = 0; i < 10; ++i) {
    const Trajectory moved =
        apply_rigid(estimate, rng.rotation(), rng.vec_in_ball(10.0));
    const ErrorReport moved_report =
        compute_errors(moved, truth, align_rigid(moved, truth));
    CHECK(std::abs(moved_report.rmse - base.rmse) < 1e-9);
    CHECK(max_abs_diff(moved_report.per_axis_rmse, base.per_axis_rmse) < 1e-7);
  }
}

TEST_CASE("degenerate geometry is reported") {
  Trajectory line;
  Trajectory truth;
  for (int i = 0; i < 10; ++i) {
    NavState x;
    x.t = i * 0.1;
    x.p = Vec3(i * 0.5, 0, 0);  // collinear
    line.states.push_back(x);
    truth.states.push_back(x);
  }
  CHECK_THROWS_WITH_AS(align_rigid(line, truth),
                       doctest::Contains("collinear"), std::invalid_argument);

  Trajectory two;
  two.states = {line.states[0], line.states[1]};
  CHECK_THROWS_WITH_AS(align_rigid(two, two), doctest::Contains("3"),
                       std::invalid_argument);
}

TEST_CASE("error report on a constant offset") {
  Rng rng(56);
  Trajectory truth = random_trajectory(rng, 16);
  Trajectory estimate = truth;
  for (NavState& x : estimate.states) x.p += Vec3(3, 4, 0);

  const ErrorReport r = compute_errors(estimate, truth, AlignmentResult{});
  CHECK(r.rmse == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.per_axis_rmse.x() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.per_axis_rmse.y() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.per_axis_rmse.z() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.count == truth.states.size());
  // rmse^2 equals the mean squared error norm by construction
  double mean_sq = 0.0;
  for (const auto& [t, e] : r.per_sample_errors) mean_sq += e.squaredNorm();
  mean_sq /= static_cast<double>(r.per_sample_errors.size());
  CHECK(r.rmse * r.rmse == doctest::Approx(mean_sq).epsilon(1e-12));
}

TEST_CASE("two-point error rmse") {
  Trajectory truth;
  Trajectory estimate;
  for (int i = 0; i < 2; ++i) {
    NavState x;
    x.t = i * 0.1;
    x.p = Vec3(i, 0, 0);
    truth.states.push_back(x);
    estimate.states.push_back(x);
  }
  estimate.states[0].p += Vec3(1, 0, 0);
  estimate.states[1].p += Vec3(0, 1, 0);
  const ErrorReport r = compute_errors(estimate, truth, AlignmentResult{});
  CHECK(r.rmse == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("improvement percentages") {
  CHECK(improvement_percent(31.12, 21.21) ==
        doctest::Approx(31.84).epsilon(0.0005));
  CHECK(improvement_percent(16.70, 16.05) ==
        doctest::Approx(3.89).epsilon(0.002));
  CHECK(improvement_percent(10.0, 10.0) == 0.0);
  CHECK_THROWS_AS(improvement_percent(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("report writers emit parseable files") {
  Rng rng(57);
  Trajectory truth = random_trajectory(rng, 8);
  Trajectory estimate = truth;
  for (NavState& x : estimate.states) x.p += Vec3(0.1, 0, 0);
  const ErrorReport r = compute_errors(estimate, truth, AlignmentResult{});

  const auto dir = std::filesystem::temp_directory_path();
  const auto errors = dir / "slip_test_errors.csv";
  const auto summary = dir / "slip_test_summary.txt";
  write_error_report(errors, r);
  write_error_summary(summary, r);

  std::ifstream in(summary);
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("rmse=", 0) == 0);
  CHECK(std::stod(line.substr(5)) == doctest::Approx(0.1).epsilon(1e-12));
  std::filesystem::remove(errors);
  std::filesystem::remove(summary);
}
