// Test-only oracles, kept independent of the closed-form implementation
// paths they are used to check.
#pragma once

#include <random>

#include <Eigen/Geometry>

#include "slip/lifted.hpp"
#include "slip/so3.hpp"

namespace slip::testing {

/// Truncated series sum_{k=0..terms} skew(theta)^k / (k+shift)!.
/// shift 0 reproduces E, shift 1 GAMMA, shift 2 LAMBDA (note the k=0 terms
/// I, I, I/2).
inline Mat3 series_matrix(const Vec3& theta, int shift, int terms = 30) {
  const Mat3 S = skew(theta);
  Mat3 power = Mat3::Identity();
  double denom = 1.0;
  for (int j = 2; j <= shift; ++j) denom *= j;
  Mat3 sum = power / denom;
  for (int k = 1; k <= terms; ++k) {
    power = Mat3(power * S);
    denom *= (k + shift);
    sum += power / denom;
  }
  return sum;
}

inline Mat3 oracle_E(const Vec3& theta) { return series_matrix(theta, 0); }
inline Mat3 oracle_Gamma(const Vec3& theta) { return series_matrix(theta, 1); }
inline Mat3 oracle_Lambda(const Vec3& theta) { return series_matrix(theta, 2); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  Vec3 vec_in_ball(double radius) {
    // rejection-sampled uniform ball
    while (true) {
      Vec3 v(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      if (v.squaredNorm() <= 1.0) return radius * v;
    }
  }

  RotationMatrix rotation() { return exp_so3(vec_in_ball(3.1)); }

  NavState nav_state() {
    NavState x;
    x.t = uniform(0, 10);
    x.p = vec_in_ball(10.0);
    x.v = vec_in_ball(5.0);
    x.R = rotation();
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a,
                    const Eigen::MatrixBase<B>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double nav_state_distance(const NavState& a, const NavState& b) {
  return std::max({max_abs_diff(a.p, b.p), max_abs_diff(a.v, b.v),
                   (a.R - b.R).cwiseAbs().maxCoeff()});
}

}  // namespace slip::testing
