#include "slip/lifted.hpp"

#include <cmath>
#include <stdexcept>

namespace slip {

LiftedState LiftedState::from_nav(const NavState& x) {
  LiftedState s;
  s.p = x.p;
  s.v = x.v;
  s.r1 = x.R.row(0);
  s.r2 = x.R.row(1);
  s.r3 = x.R.row(2);
  return s;
}

NavState LiftedState::to_nav(double t) const {
  NavState x;
  x.t = t;
  x.p = p;
  x.v = v;
  x.R = rotation();
  return x;
}

Vec15 LiftedState::to_vec() const {
  Vec15 x;
  x << p, v, r1, r2, r3;
  return x;
}

LiftedState LiftedState::from_vec(const Vec15& x) {
  LiftedState s;
  s.p = x.segment<3>(0);
  s.v = x.segment<3>(3);
  s.r1 = x.segment<3>(6);
  s.r2 = x.segment<3>(9);
  s.r3 = x.segment<3>(12);
  return s;
}

Mat3 LiftedState::rotation() const {
  Mat3 R;
  R.row(0) = r1;
  R.row(1) = r2;
  R.row(2) = r3;
  return R;
}

Mat3 a_hat(const Vec3& a, int i) {
  Mat3 m = Mat3::Zero();
  m.row(i) = a.transpose();
  return m;
}

Mat15 build_A(double s, const Vec3& a, const Vec3& w) {
  Mat15 A = Mat15::Zero();
  A.block<3, 3>(0, 3) = s * Mat3::Identity();
  const Mat3 W = -skew(w);
  for (int i = 0; i < 3; ++i) {
    A.block<3, 3>(3, 6 + 3 * i) = a_hat(a, i);
    A.block<3, 3>(6 + 3 * i, 6 + 3 * i) = W;
  }
  return A;
}

Mat15 exp_A_closed(double s, const Vec3& a, const Vec3& theta) {
  const Mat3 E = exp_so3(-theta);
  const Mat3 G = gamma_so3(-theta);
  const Mat3 L = lambda_so3(-theta);

  Mat15 M = Mat15::Identity();
  M.block<3, 3>(0, 3) = s * Mat3::Identity();
  for (int i = 0; i < 3; ++i) {
    const Mat3 Ai = a_hat(a, i);
    M.block<3, 3>(0, 6 + 3 * i) = s * Ai * L;
    M.block<3, 3>(3, 6 + 3 * i) = Ai * G;
    M.block<3, 3>(6 + 3 * i, 6 + 3 * i) = E;
  }
  return M;
}

Mat15 exp_A_series(const Mat15& A, int terms) {
  if (terms < 1) {
    throw std::invalid_argument("exp_A_series: terms must be >= 1");
  }
  Mat15 sum = Mat15::Identity();
  Mat15 power = Mat15::Identity();
  for (int k = 1; k <= terms; ++k) {
    power = Mat15(power * A) / static_cast<double>(k);
    sum += power;
  }
  return sum;
}

LiftedState propagate_lifted(const LiftedState& x, double dt, const Vec3& a,
                             const Vec3& w, const Vec3& g) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("propagate_lifted: dt must be finite and > 0");
  }
  if (!is_finite(a) || !is_finite(w) || !is_finite(g) ||
      !x.to_vec().allFinite()) {
    throw std::invalid_argument("propagate_lifted: non-finite input");
  }
  const Mat15 M = exp_A_closed(dt, dt * a, dt * w);
  Vec15 b = Vec15::Zero();
  b.segment<3>(0) = 0.5 * dt * dt * g;
  b.segment<3>(3) = dt * g;
  return LiftedState::from_vec(M * x.to_vec() + b);
}

}  // namespace slip
