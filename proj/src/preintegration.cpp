#include "slip/preintegration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace slip {

namespace {

constexpr int kRenormEvery = 1000;
constexpr double kRenormResidual = 1e-7;

void check_step_inputs(const NavState& x, const Vec3& a, const Vec3& w,
                       double dt, const Vec3& g, const char* who) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument(std::string(who) +
                                ": dt must be finite and > 0");
  }
  if (!is_finite(a) || !is_finite(w) || !is_finite(g) || !is_finite(x.p) ||
      !is_finite(x.v) || !is_finite(x.R) || !std::isfinite(x.t)) {
    throw std::invalid_argument(std::string(who) + ": non-finite input");
  }
}

}  // namespace

const char* to_string(Model m) {
  return m == Model::kClassical ? "classical" : "proposed";
}

NavState step_classical(const NavState& x, const Vec3& a, const Vec3& w,
                        double dt, const Vec3& g) {
  check_step_inputs(x, a, w, dt, g, "step_classical");
  const Vec3 theta = w * dt;
  NavState out;
  out.t = x.t + dt;
  out.p = x.p + x.v * dt + 0.5 * g * dt * dt + 0.5 * (x.R * a) * dt * dt;
  out.v = x.v + g * dt + (x.R * a) * dt;
  out.R = x.R * exp_so3(theta);
  return out;
}

NavState step_proposed(const NavState& x, const Vec3& a, const Vec3& w,
                       double dt, const Vec3& g) {
  check_step_inputs(x, a, w, dt, g, "step_proposed");
  const Vec3 theta = w * dt;
  NavState out;
  out.t = x.t + dt;
  out.p = x.p + x.v * dt + (0.5 * g + x.R * (lambda_so3(theta) * a)) * dt * dt;
  out.v = x.v + (g + x.R * (gamma_so3(theta) * a)) * dt;
  out.R = x.R * exp_so3(theta);
  return out;
}

NavState step(const NavState& x, const Vec3& a, const Vec3& w, double dt,
              const Vec3& g, Model model) {
  return model == Model::kClassical ? step_classical(x, a, w, dt, g)
                                    : step_proposed(x, a, w, dt, g);
}

PreintDelta preintegrate(std::span<const ImuSample> samples, double end_time,
                         Model model) {
  if (samples.empty()) {
    throw std::invalid_argument("preintegrate: empty sample span");
  }
  PreintDelta d;
  d.model = model;
  int since_renorm = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const ImuSample& s = samples[k];
    const double t_next =
        (k + 1 < samples.size()) ? samples[k + 1].t : end_time;
    const double dt = t_next - s.t;
    if (!(dt > 0.0)) {
      throw std::invalid_argument(
          "preintegrate: timestamps must strictly increase (sample " +
          std::to_string(k) + ")");
    }
    if (!is_finite(s.a) || !is_finite(s.w) || !std::isfinite(s.t)) {
      throw std::invalid_argument("preintegrate: non-finite sample " +
                                  std::to_string(k));
    }
    const Vec3 theta = s.w * dt;
    // zeta consumes mu(i,k) and F(i,k) before either is advanced.
    if (model == Model::kProposed) {
      d.zeta += (d.F * (lambda_so3(theta) * s.a)) * dt * dt + d.mu * dt;
      d.mu += (d.F * (gamma_so3(theta) * s.a)) * dt;
    } else {
      d.zeta += 0.5 * (d.F * s.a) * dt * dt + d.mu * dt;
      d.mu += (d.F * s.a) * dt;
    }
    d.F = RotationMatrix(d.F * exp_so3(theta));
    d.dT += dt;
    if (++since_renorm >= kRenormEvery ||
        orthonormality_residual(d.F) > kRenormResidual) {
      d.F = nearest_rotation(d.F);
      since_renorm = 0;
    }
  }
  return d;
}

NavState apply_delta(const NavState& xi, const PreintDelta& d, const Vec3& g) {
  if (d.dT < 0.0) {
    throw std::invalid_argument("apply_delta: negative accumulated time");
  }
  const Vec3 theta_ij = xi.v * d.dT + 0.5 * g * d.dT * d.dT;
  NavState out;
  out.t = xi.t + d.dT;
  out.p = xi.p + theta_ij + xi.R * d.zeta;
  out.v = xi.v + g * d.dT + xi.R * d.mu;
  out.R = xi.R * d.F;
  return out;
}

Transform transform_between(const NavState& xi, const PreintDelta& d,
                            const Vec3& g) {
  if (d.dT < 0.0) {
    throw std::invalid_argument("transform_between: negative accumulated time");
  }
  const Vec3 theta_ij = xi.v * d.dT + 0.5 * g * d.dT * d.dT;
  Transform T;
  T.rot = d.F.transpose();
  T.trans = -(d.F.transpose() * (d.zeta + xi.R.transpose() * theta_ij));
  return T;
}

NavState pose_from_transform(const NavState& xi, const Transform& T,
                             double tj) {
  NavState out;
  out.t = tj;
  out.R = xi.R * T.rot.transpose();
  out.p = xi.p - out.R * T.trans;
  out.v = xi.v;
  return out;
}

}  // namespace slip
