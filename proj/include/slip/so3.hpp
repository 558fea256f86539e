#pragma once

#include "slip/types.hpp"

namespace slip {

/// Scalar series functions h1 = sin z, h2 = 1 - cos z, h3 = z - sin z,
/// h4 = 2 cos z - 2 + z^2, evaluated in cancellation-free form.
struct HFunctions {
  double h1;
  double h2;
  double h3;
  double h4;
};

HFunctions h_functions(double z);

/// Antisymmetric matrix implementing the cross product: skew(w) * v = w x v.
Mat3 skew(const Vec3& w);

/// Coefficients of I-free terms in the three series matrices:
///   E      = I   + c1 * S + c2 * S^2
///   Gamma  = I   + c2 * S + c3 * S^2
///   Lambda = I/2 + c3 * S + c4 * S^2
/// with S = skew(theta), z = |theta|, and
///   c1 = h1(z)/z, c2 = h2(z)/z^2, c3 = h3(z)/z^3, c4 = h4(z)/(2 z^4).
struct SeriesCoeffs {
  double c1;
  double c2;
  double c3;
  double c4;
};

/// Below this |theta| the coefficients switch to Taylor expansions; the
/// closed forms divide by powers of z and lose all precision near zero.
inline constexpr double kSmallAngle = 1e-4;

SeriesCoeffs series_coeffs(double z);

namespace detail {
// Both branches exposed so the switchover can be tested for continuity.
SeriesCoeffs series_coeffs_closed(double z);
SeriesCoeffs series_coeffs_taylor(double z);
}  // namespace detail

/// SO(3) exponential (Rodrigues): exp_so3(theta) = exp(skew(theta)).
RotationMatrix exp_so3(const Vec3& theta);

/// First integral of the rotation series: Gamma = sum_k S^k / (k+1)!.
/// Maps a constant body-frame acceleration to the exact velocity increment.
Mat3 gamma_so3(const Vec3& theta);

/// Second integral: Lambda = sum_k S^k / (k+2)!. Maps a constant body-frame
/// acceleration to the exact position increment.
Mat3 lambda_so3(const Vec3& theta);

/// max |R^T R - I| over entries, plus |det(R) - 1|.
double orthonormality_residual(const Mat3& R);

bool is_rotation(const Mat3& R, double tol = 1e-9);

/// Nearest rotation in Frobenius norm (polar factor with det forced to +1).
RotationMatrix nearest_rotation(const Mat3& M);

}  // namespace slip
