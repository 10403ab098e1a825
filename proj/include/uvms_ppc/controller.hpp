// Copyright 2026 The uvms_ppc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file controller.hpp
 * @brief Two-level model-free prescribed-performance force/orientation controller.
 *
 * First level: task errors e_x = [force error; orientation error] are normalized by
 * their envelopes, mapped through eps(xi) = ln((1+xi)/(1-xi)) and turned into a task
 * reference velocity x_dot_r = -k_x eps, which the Jacobian pseudo-inverse lifts to a
 * generalized reference velocity zeta_r.
 *
 * Second level: e_zeta = zeta - zeta_r is normalized the same way and
 * tau_j = -k_zeta_j r(xi_j) eps(xi_j) / rho_j with r = 2 / (1 - xi^2).
 *
 * The law only reads measured force, end-effector attitude, configuration and velocity.
 * This header deliberately includes nothing from the plant or environment.
 */

#ifndef UVMS_PPC_CONTROLLER_HPP_
#define UVMS_PPC_CONTROLLER_HPP_

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "uvms_ppc/kinematics.hpp"
#include "uvms_ppc/performance.hpp"
#include "uvms_ppc/types.hpp"

namespace uvms {

struct ControllerConfig {
  Vec6 k_x = Vec6::Constant(0.2);
  VecX k_zeta;
  std::array<PerformanceFunction, 6> perf_x{};
  std::vector<PerformanceFunction> perf_zeta;
  VecX secondary_velocity;  ///< optional null-space velocity x_dot_0 (empty = none)

  std::size_t dof() const { return perf_zeta.size(); }

  void validate(std::size_t n) const {
    if (static_cast<std::size_t>(k_zeta.size()) != n || perf_zeta.size() != n) {
      throw ValidationError("velocity-level gains and envelopes need n = " + std::to_string(n) + " entries");
    }
    if (!(k_x.array() > 0.0).all()) throw ValidationError("task gains k_x must be positive");
    if (!(k_zeta.array() > 0.0).all()) throw ValidationError("velocity gains k_zeta must be positive");
    for (const auto& pf : perf_x) pf.validate();
    for (const auto& pf : perf_zeta) pf.validate();
    if (secondary_velocity.size() != 0 && static_cast<std::size_t>(secondary_velocity.size()) != n) {
      throw ValidationError("secondary velocity needs n entries");
    }
  }
};

/// Desired force and end-effector attitude at one instant.
struct TaskReference {
  Vec3 force = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();
};

/// What the controller is allowed to observe besides the configuration and velocity.
struct SensorReading {
  Vec3 measured_force = Vec3::Zero();     ///< f_e + noise, exerted on the environment
  Vec3 end_effector_euler = Vec3::Zero();
};

/// Everything the law computed in one call.
struct ControlDiagnostics {
  double time = 0.0;
  Vec6 e_x = Vec6::Zero();
  Vec6 rho_x = Vec6::Zero();
  Vec6 xi_x = Vec6::Zero();
  Vec6 eps_x = Vec6::Zero();
  Vec6 task_velocity = Vec6::Zero();  ///< x_dot_r
  VecX zeta_r;
  VecX e_zeta;
  VecX rho_zeta;
  VecX xi_zeta;
  VecX eps_zeta;
  VecX tau;
};

namespace detail {

inline double checked_xi(double e, double rho, ErrorLevel level, int channel, double t) {
  const double xi = e / rho;
  if (!(std::abs(xi) < 1.0)) throw EnvelopeViolation(level, channel, t, e, rho);
  return xi;
}

// Odd in xi bit for bit: eps(-xi) == -eps(xi).
inline double odd_transform(double xi) {
  const double a = std::abs(xi);
  const double mag = std::log((1.0 + a) / (1.0 - a));
  return std::signbit(xi) ? -mag : mag;
}

}  // namespace detail

/// e_x = [f_measured - f_desired; wrap(attitude - desired attitude)].
inline Vec6 task_error(const SensorReading& sensor, const TaskReference& ref) {
  Vec6 e;
  e.head<3>() = sensor.measured_force - ref.force;
  for (int i = 0; i < 3; ++i) e[3 + i] = wrap_angle(sensor.end_effector_euler[i] - ref.orientation[i]);
  return e;
}

/// x_dot_r,j = -k_x,j eps(e_x,j / rho_x,j(t)).
inline Vec6 reference_velocity(const Vec6& e_x, double t, const ControllerConfig& cfg) {
  Vec6 xr;
  for (int j = 0; j < 6; ++j) {
    const double xi = detail::checked_xi(e_x[j], cfg.perf_x[static_cast<std::size_t>(j)].value(t),
                                         ErrorLevel::kTask, j + 1, t);
    xr[j] = -cfg.k_x[j] * detail::odd_transform(xi);
  }
  return xr;
}

/// zeta_r = J+ x_dot_r (+ null-space projection of x_dot_0 when given).
inline VecX joint_reference(const MatX& j, const Vec6& task_velocity, const VecX& secondary = VecX()) {
  return nullspace_projected_velocity(j, task_velocity, secondary);
}

/// tau_j = -k_zeta,j r(xi_j) eps(xi_j) / rho_zeta,j(t), xi_j = e_zeta,j / rho_zeta,j(t).
inline VecX torque_law(const VecX& e_zeta, double t, const ControllerConfig& cfg) {
  if (static_cast<std::size_t>(e_zeta.size()) != cfg.perf_zeta.size()) {
    throw ValidationError("velocity error has wrong dimension");
  }
  VecX tau(e_zeta.size());
  for (Eigen::Index j = 0; j < e_zeta.size(); ++j) {
    const double rho = cfg.perf_zeta[static_cast<std::size_t>(j)].value(t);
    const double xi = detail::checked_xi(e_zeta[j], rho, ErrorLevel::kVelocity, static_cast<int>(j) + 1, t);
    const double r = 2.0 / (1.0 - xi * xi);
    tau[j] = -cfg.k_zeta[j] * r * detail::odd_transform(xi) / rho;
  }
  return tau;
}

/// Both levels from already-formed task errors. J is the analytical Jacobian.
inline ControlDiagnostics control_law(const Vec6& e_x, const MatX& j, const VecX& zeta, double t,
                                      const ControllerConfig& cfg) {
  ControlDiagnostics d;
  d.time = t;
  d.e_x = e_x;
  for (int c = 0; c < 6; ++c) {
    d.rho_x[c] = cfg.perf_x[static_cast<std::size_t>(c)].value(t);
    d.xi_x[c] = detail::checked_xi(e_x[c], d.rho_x[c], ErrorLevel::kTask, c + 1, t);
    d.eps_x[c] = detail::odd_transform(d.xi_x[c]);
    d.task_velocity[c] = -cfg.k_x[c] * d.eps_x[c];
  }
  d.zeta_r = joint_reference(j, d.task_velocity, cfg.secondary_velocity);
  d.e_zeta = zeta - d.zeta_r;

  const Eigen::Index n = zeta.size();
  d.rho_zeta.resize(n);
  d.xi_zeta.resize(n);
  d.eps_zeta.resize(n);
  d.tau.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const double rho = cfg.perf_zeta[static_cast<std::size_t>(c)].value(t);
    const double xi = detail::checked_xi(d.e_zeta[c], rho, ErrorLevel::kVelocity, static_cast<int>(c) + 1, t);
    d.rho_zeta[c] = rho;
    d.xi_zeta[c] = xi;
    d.eps_zeta[c] = detail::odd_transform(xi);
    d.tau[c] = -cfg.k_zeta[c] * (2.0 / (1.0 - xi * xi)) * d.eps_zeta[c] / rho;
  }
  return d;
}

/// One full controller evaluation: Steps I-a, I-b, II-a, II-b.
inline ControlDiagnostics control_step(const SensorReading& sensor, const TaskReference& ref,
                                       const Configuration& config, const VecX& zeta, double t,
                                       const ControllerConfig& cfg, const KinematicModel& kinematics) {
  const Vec6 e_x = task_error(sensor, ref);
  return control_law(e_x, analytical_jacobian(config, kinematics), zeta, t, cfg);
}

/// Stateless law with a cache of its last evaluation.
class PpcController {
 public:
  PpcController(ControllerConfig cfg, KinematicModel kinematics)
      : cfg_(std::move(cfg)), kinematics_(std::move(kinematics)) {
    cfg_.validate(kinematics_.dof());
  }

  /// Throws ValidationError unless every initial error sits strictly inside rho(0).
  void check_initial_conditions(const SensorReading& sensor, const TaskReference& ref,
                                const Configuration& config, const VecX& zeta, double t0 = 0.0) const {
    const Vec6 e_x = task_error(sensor, ref);
    for (int j = 0; j < 6; ++j) {
      const double rho = cfg_.perf_x[static_cast<std::size_t>(j)].value(t0);
      if (!(std::abs(e_x[j]) < rho)) {
        throw ValidationError("initial task error " + std::to_string(j + 1) + " (|e|=" +
                              std::to_string(std::abs(e_x[j])) + ") is not inside rho0=" + std::to_string(rho));
      }
    }
    Vec6 xr;
    for (int j = 0; j < 6; ++j) {
      const double xi = e_x[j] / cfg_.perf_x[static_cast<std::size_t>(j)].value(t0);
      xr[j] = -cfg_.k_x[j] * detail::odd_transform(xi);
    }
    const VecX e_zeta = zeta - joint_reference(analytical_jacobian(config, kinematics_), xr, cfg_.secondary_velocity);
    for (Eigen::Index j = 0; j < e_zeta.size(); ++j) {
      const double rho = cfg_.perf_zeta[static_cast<std::size_t>(j)].value(t0);
      if (!(std::abs(e_zeta[j]) < rho)) {
        throw ValidationError("initial velocity error " + std::to_string(j + 1) + " (|e|=" +
                              std::to_string(std::abs(e_zeta[j])) + ") is not inside rho0=" + std::to_string(rho));
      }
    }
  }

  const VecX& compute(const SensorReading& sensor, const TaskReference& ref, const Configuration& config,
                      const VecX& zeta, double t) {
    last_ = control_step(sensor, ref, config, zeta, t, cfg_, kinematics_);
    return last_.tau;
  }

  const ControlDiagnostics& last() const { return last_; }
  const ControllerConfig& config() const { return cfg_; }

 private:
  ControllerConfig cfg_;
  KinematicModel kinematics_;
  ControlDiagnostics last_;
};

}  // namespace uvms

#endif  // UVMS_PPC_CONTROLLER_HPP_
