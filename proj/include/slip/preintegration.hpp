#pragma once

#include <span>

#include "slip/so3.hpp"

namespace slip {

/// Integration model. Classical holds the world-frame acceleration constant
/// over each sampling interval; Proposed holds the body-frame acceleration
/// constant and integrates the switched linear system exactly.
enum class Model {
  kClassical,
  kProposed,
};

const char* to_string(Model m);

/// Compound measurement between keyframes i and j, expressed in the body
/// frame at i. Independent of the state at i; gravity and the velocity
/// carry-over are reintroduced by apply_delta.
struct PreintDelta {
  RotationMatrix F = Mat3::Identity();  ///< accumulated rotation F(i,j)
  Vec3 zeta = Vec3::Zero();             ///< position compound, m
  Vec3 mu = Vec3::Zero();               ///< velocity compound, m/s
  double dT = 0.0;                      ///< sum of sample intervals, s
  Model model = Model::kProposed;
};

/// Relative pose between the body frames at i and j: x_j = rot * x_i + trans.
struct Transform {
  RotationMatrix rot = Mat3::Identity();
  Vec3 trans = Vec3::Zero();
};

/// One interval under the classical model, theta = w * dt:
///   p += v dt + (g + R a) dt^2 / 2
///   v += (g + R a) dt
///   R  = R * exp_so3(theta)
NavState step_classical(const NavState& x, const Vec3& a, const Vec3& w,
                        double dt, const Vec3& g);

/// One interval under the proposed model:
///   p += v dt + (g/2 + R lambda_so3(theta) a) dt^2
///   v += (g + R gamma_so3(theta) a) dt
///   R  = R * exp_so3(theta)
/// Exact whenever (a, w) really are constant in the body frame over dt.
NavState step_proposed(const NavState& x, const Vec3& a, const Vec3& w,
                       double dt, const Vec3& g);

NavState step(const NavState& x, const Vec3& a, const Vec3& w, double dt,
              const Vec3& g, Model model);

/// Folds the measurements of [samples[0].t, end_time) into one PreintDelta.
/// Sample k is held constant over [t_k, t_{k+1}), the last one over
/// [t_last, end_time). Throws std::invalid_argument on an empty span or
/// timestamps that do not strictly increase up to end_time.
///
/// The accumulated rotation is reprojected onto SO(3) every 1000 samples or
/// whenever its orthonormality residual exceeds 1e-7.
PreintDelta preintegrate(std::span<const ImuSample> samples, double end_time,
                         Model model);

/// State at j from the state at i and the compound measurement:
///   p_j = p_i + v_i dT + g dT^2 / 2 + R_i zeta
///   v_j = v_i + g dT + R_i mu
///   R_j = R_i F
NavState apply_delta(const NavState& xi, const PreintDelta& d, const Vec3& g);

/// Relative body-frame pose implied by the compound measurement:
///   rot = F^T, trans = -F^T (zeta + R_i^T Theta),
/// Theta = v_i dT + g dT^2 / 2 being the world-frame carry-over displacement.
Transform transform_between(const NavState& xi, const PreintDelta& d,
                            const Vec3& g);

/// Inverse of transform_between: reassembles the pose at j from the pose at
/// i and the relative transform. Velocity is not carried by a Transform and
/// is left at the value of xi.
NavState pose_from_transform(const NavState& xi, const Transform& T,
                             double tj);

}  // namespace slip
