#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace slip {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// A Mat3 expected to satisfy R^T R = I and det(R) = 1 within 1e-9 per
/// entry. The alias documents intent; validity is enforced at trust
/// boundaries (file ingestion, long integrations) rather than by the type
/// system.
using RotationMatrix = Mat3;

inline Vec3 standard_gravity() { return {0.0, 0.0, -9.81}; }

/// One gyroscope + accelerometer reading in the body frame. The
/// accelerometer reports specific force a_B, i.e. the world-frame
/// acceleration is R * a_B + g.
struct ImuSample {
  double t = 0.0;          ///< seconds since stream epoch
  Vec3 w = Vec3::Zero();   ///< angular rate, rad/s
  Vec3 a = Vec3::Zero();   ///< specific force, m/s^2
};

/// Position, velocity and body-to-world rotation at one instant.
struct NavState {
  double t = 0.0;                       ///< seconds since stream epoch
  Vec3 p = Vec3::Zero();                ///< world frame, m
  Vec3 v = Vec3::Zero();                ///< world frame, m/s
  RotationMatrix R = Mat3::Identity();  ///< body-to-world
};

/// Timestamps inside a stream are double seconds relative to epoch_ns.
/// Absolute nanosecond stamps (EuRoC logs start around 1.4e18 ns) do not fit
/// a double at nanosecond resolution, so the integer epoch carries the
/// absolute part and the per-sample residual stays small and exact.
struct ImuStream {
  std::int64_t epoch_ns = 0;
  std::vector<ImuSample> samples;  ///< strictly increasing t
};

struct Trajectory {
  std::int64_t epoch_ns = 0;
  std::vector<NavState> states;  ///< strictly increasing t
};

inline bool is_finite(const Vec3& v) { return v.allFinite(); }
inline bool is_finite(const Mat3& m) { return m.allFinite(); }

}  // namespace slip
