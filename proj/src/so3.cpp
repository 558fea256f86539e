#include "slip/so3.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace slip {

HFunctions h_functions(double z) {
  // 1 - cos z and 2 cos z - 2 + z^2 cancel catastrophically for small z;
  // both rewrite exactly through sin(z/2).
  const double s = std::sin(z);
  const double sh = std::sin(0.5 * z);
  const double one_minus_cos = 2.0 * sh * sh;
  return HFunctions{
      .h1 = s,
      .h2 = one_minus_cos,
      .h3 = z - s,
      .h4 = z * z - 2.0 * one_minus_cos,
  };
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  // clang-format off
  m <<   0.0, -w.z(),  w.y(),
       w.z(),    0.0, -w.x(),
      -w.y(),  w.x(),    0.0;
  // clang-format on
  return m;
}

namespace detail {

SeriesCoeffs series_coeffs_closed(double z) {
  const HFunctions h = h_functions(z);
  const double z2 = z * z;
  return SeriesCoeffs{
      .c1 = h.h1 / z,
      .c2 = h.h2 / z2,
      .c3 = h.h3 / (z2 * z),
      .c4 = h.h4 / (2.0 * z2 * z2),
  };
}

SeriesCoeffs series_coeffs_taylor(double z) {
  const double z2 = z * z;
  const double z4 = z2 * z2;
  return SeriesCoeffs{
      .c1 = 1.0 - z2 / 6.0 + z4 / 120.0,
      .c2 = 0.5 - z2 / 24.0 + z4 / 720.0,
      .c3 = 1.0 / 6.0 - z2 / 120.0 + z4 / 5040.0,
      .c4 = 1.0 / 24.0 - z2 / 720.0 + z4 / 40320.0,
  };
}

}  // namespace detail

SeriesCoeffs series_coeffs(double z) {
  return z < kSmallAngle ? detail::series_coeffs_taylor(z)
                         : detail::series_coeffs_closed(z);
}

namespace {

Mat3 series_matrix(const Vec3& theta, double c0, double cS, double cS2) {
  const Mat3 S = skew(theta);
  return c0 * Mat3::Identity() + cS * S + cS2 * (S * S);
}

}  // namespace

RotationMatrix exp_so3(const Vec3& theta) {
  const SeriesCoeffs c = series_coeffs(theta.norm());
  return series_matrix(theta, 1.0, c.c1, c.c2);
}

Mat3 gamma_so3(const Vec3& theta) {
  const SeriesCoeffs c = series_coeffs(theta.norm());
  return series_matrix(theta, 1.0, c.c2, c.c3);
}

Mat3 lambda_so3(const Vec3& theta) {
  const SeriesCoeffs c = series_coeffs(theta.norm());
  return series_matrix(theta, 0.5, c.c3, c.c4);
}

double orthonormality_residual(const Mat3& R) {
  const Mat3 gram = R.transpose() * R - Mat3::Identity();
  return gram.cwiseAbs().maxCoeff() + std::abs(R.determinant() - 1.0);
}

bool is_rotation(const Mat3& R, double tol) {
  const Mat3 gram = R.transpose() * R - Mat3::Identity();
  return gram.cwiseAbs().maxCoeff() <= tol &&
         std::abs(R.determinant() - 1.0) <= tol;
}

RotationMatrix nearest_rotation(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    R = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return R;
}

}  // namespace slip
