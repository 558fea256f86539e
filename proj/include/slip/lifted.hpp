#pragma once

#include "slip/so3.hpp"

namespace slip {

using Mat15 = Eigen::Matrix<double, 15, 15>;
using Vec15 = Eigen::Matrix<double, 15, 1>;

/// 15-dimensional state [p; v; r1; r2; r3] on which the body-frame-constant
/// kinematics are linear. r1, r2, r3 are the rows of the body-to-world
/// rotation (equivalently the columns of world-to-body); each row obeys
/// r_i' = -skew(w) r_i, which is what makes the diagonal blocks of the
/// system matrix plain -skew(w).
struct LiftedState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 r1 = Vec3::UnitX();
  Vec3 r2 = Vec3::UnitY();
  Vec3 r3 = Vec3::UnitZ();

  static LiftedState from_nav(const NavState& x);
  NavState to_nav(double t) const;

  Vec15 to_vec() const;
  static LiftedState from_vec(const Vec15& x);

  /// Body-to-world rotation reassembled from the stored rows.
  Mat3 rotation() const;
};

/// Rank-one selector block: a_hat(a, i) = e_i * a^T (row i equals a^T, other
/// rows zero), so that a_hat(a,0) r1 + a_hat(a,1) r2 + a_hat(a,2) r3 = R a
/// with R the body-to-world rotation whose rows are r1..r3.
Mat3 a_hat(const Vec3& a, int i);

/// Continuous-time system matrix A(s, a, w):
///   block(0,1) = s*I, block(1, 2+i) = a_hat(a, i), block(2+i, 2+i) = -skew(w).
Mat15 build_A(double s, const Vec3& a, const Vec3& w);

/// Closed form of exp(A(s, a, theta)):
///   [ I  sI  s*A1*L  s*A2*L  s*A3*L ]
///   [ 0   I    A1*G    A2*G    A3*G ]
///   [ 0   0       E       0       0 ]
///   [ 0   0       0       E       0 ]
///   [ 0   0       0       0       E ]
/// with Ai = a_hat(a, i-1), L = lambda_so3(-theta), G = gamma_so3(-theta),
/// E = exp_so3(-theta). For an interval of length dt with inputs (a_B, w_B),
/// callers pass s = dt, a = dt * a_B, theta = dt * w_B; the same tuple fed to
/// build_A reproduces this matrix through the plain series.
Mat15 exp_A_closed(double s, const Vec3& a, const Vec3& theta);

/// Truncated exponential series sum_{k=0..terms} A^k / k!. Deliberately the
/// naive sum; it is the independent oracle for exp_A_closed.
Mat15 exp_A_series(const Mat15& A, int terms);

/// One zero-order-hold step of the lifted dynamics:
///   x+ = exp(A(dt, dt*a, dt*w)) x + [g dt^2/2; g dt; 0; 0; 0].
/// Throws std::invalid_argument on non-finite input or dt <= 0.
LiftedState propagate_lifted(const LiftedState& x, double dt, const Vec3& a,
                             const Vec3& w, const Vec3& g);

}  // namespace slip
