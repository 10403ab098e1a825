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
 * @file dynamics.hpp
 * @brief Floating-base equation of motion of the vehicle-manipulator system.
 *
 *   M(q) zeta_dot + C(q, zeta) zeta + D(zeta) zeta + g(q) + Jg^T lambda + delta = tau
 *
 * The generalized velocity uses body-frame quasi-velocities for the vehicle, so the
 * Coriolis matrix is the Christoffel part (joint-angle dependence of M) plus the
 * Kirchhoff cross-product part of the floating base. Both pieces keep M_dot - 2C
 * skew-symmetric.
 */

#ifndef UVMS_PPC_DYNAMICS_HPP_
#define UVMS_PPC_DYNAMICS_HPP_

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "uvms_ppc/kinematics.hpp"
#include "uvms_ppc/types.hpp"

namespace uvms {

/// Rigid body with its hydrostatic data, expressed in the body's own frame.
struct RigidBody {
  double mass = 0.0;                      ///< kg
  Vec3 center_of_gravity = Vec3::Zero();  ///< m
  Mat3 inertia = Mat3::Zero();            ///< about the center of gravity, kg m^2
  double displaced_volume = 0.0;          ///< m^3
  Vec3 center_of_buoyancy = Vec3::Zero(); ///< m
};

struct DynamicModel {
  KinematicModel kinematics;
  RigidBody vehicle;
  Mat6 added_mass = Mat6::Zero();  ///< vehicle hydrodynamic added mass
  std::vector<RigidBody> links;    ///< one per joint, in that joint's frame
  VecX armature;                   ///< reflected actuator inertia per joint
  VecX linear_drag;                ///< n entries, >= 0
  VecX quadratic_drag;             ///< n entries, >= 0
  double fluid_density = 1000.0;   ///< kg/m^3
  double gravity = 9.81;           ///< m/s^2

  std::size_t dof() const { return kinematics.dof(); }
};

/// Vehicle position/attitude, joint angles and generalized velocity.
struct SystemState {
  Configuration config;
  VecX velocity;  ///< zeta
};

namespace detail {

/// Translational (3 x n) and rotational (3 x n) Jacobians of a point rigidly attached to
/// body `body` (-1 = vehicle, i = link i), all in the vehicle frame.
struct PointJacobian {
  MatX linear;
  MatX angular;
};

inline PointJacobian point_jacobian(const ArmFrames& f, int body, const Vec3& r, std::size_t n) {
  PointJacobian pj{MatX::Zero(3, static_cast<Eigen::Index>(n)),
                   MatX::Zero(3, static_cast<Eigen::Index>(n))};
  pj.linear.block<3, 3>(0, 0).setIdentity();
  pj.linear.block<3, 3>(0, 3) = -skew(r);
  pj.angular.block<3, 3>(0, 3).setIdentity();
  for (int j = 0; j <= body; ++j) {
    const auto col = static_cast<Eigen::Index>(kVehicleDof) + j;
    pj.linear.col(col) = f.axes[static_cast<std::size_t>(j)].cross(r - f.origins[static_cast<std::size_t>(j)]);
    pj.angular.col(col) = f.axes[static_cast<std::size_t>(j)];
  }
  return pj;
}

inline Vec3 link_point(const ArmFrames& f, std::size_t link, const Vec3& local) {
  return f.origins[link] + f.rotations[link] * local;
}

inline MatX joint_mass_matrix(const VecX& joints, const DynamicModel& model) {
  const std::size_t n = model.dof();
  const ArmFrames f = arm_frames(joints, model.kinematics);
  MatX m = MatX::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  const RigidBody& v = model.vehicle;
  const PointJacobian pv = point_jacobian(f, -1, v.center_of_gravity, n);
  m.noalias() += v.mass * pv.linear.transpose() * pv.linear;
  m.noalias() += pv.angular.transpose() * v.inertia * pv.angular;
  m.topLeftCorner<6, 6>() += model.added_mass;

  for (std::size_t i = 0; i < model.links.size(); ++i) {
    const RigidBody& b = model.links[i];
    const Vec3 c = link_point(f, i, b.center_of_gravity);
    const PointJacobian pj = point_jacobian(f, static_cast<int>(i), c, n);
    const Mat3 inertia = f.rotations[i] * b.inertia * f.rotations[i].transpose();
    m.noalias() += b.mass * pj.linear.transpose() * pj.linear;
    m.noalias() += pj.angular.transpose() * inertia * pj.angular;
  }
  for (Eigen::Index i = 0; i < model.armature.size(); ++i) {
    m(static_cast<Eigen::Index>(kVehicleDof) + i, static_cast<Eigen::Index>(kVehicleDof) + i) +=
        model.armature[i];
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace detail

/// Checks dimensions, signs and positive definiteness at sampled configurations.
inline void validate_model(const DynamicModel& model, int samples = 32, unsigned seed = 7) {
  const std::size_t nj = model.kinematics.joint_count();
  const auto n = static_cast<Eigen::Index>(model.dof());
  if (nj < 1) throw ModelError("model needs at least one joint (n >= 7)");
  if (model.links.size() != nj) throw ModelError("one link body is required per joint");
  if (static_cast<std::size_t>(model.armature.size()) != nj) throw ModelError("armature needs one entry per joint");
  if (model.linear_drag.size() != n || model.quadratic_drag.size() != n) {
    throw ModelError("drag vectors need n = " + std::to_string(n) + " entries");
  }
  if ((model.linear_drag.array() < 0.0).any() || (model.quadratic_drag.array() < 0.0).any()) {
    throw ModelError("drag coefficients must be non-negative");
  }
  if ((model.armature.array() < 0.0).any()) throw ModelError("armature must be non-negative");
  if (model.vehicle.mass <= 0.0) throw ModelError("vehicle mass must be positive");
  for (const auto& j : model.kinematics.joints) {
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) throw ModelError("joint '" + j.name + "' axis is not unit length");
    if (j.lower > j.upper) throw ModelError("joint '" + j.name + "' has lower limit above upper limit");
  }
  if ((model.added_mass - model.added_mass.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ModelError("added-mass matrix must be symmetric");
  }
  std::mt19937 rng(seed);
  for (int s = 0; s < samples; ++s) {
    VecX q(static_cast<Eigen::Index>(nj));
    for (std::size_t i = 0; i < nj; ++i) {
      const auto& js = model.kinematics.joints[i];
      q[static_cast<Eigen::Index>(i)] = std::uniform_real_distribution<double>(js.lower, js.upper)(rng);
    }
    const MatX m = detail::joint_mass_matrix(q, model);
    const double min_eig = Eigen::SelfAdjointEigenSolver<MatX>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (!(min_eig > 0.0)) {
      std::ostringstream os;
      os << "mass matrix not positive definite (min eigenvalue " << min_eig << ") at joints " << q.transpose();
      throw ModelError(os.str());
    }
  }
}

/// Composite inertia of the floating base and arm plus vehicle added mass.
inline MatX mass_matrix(const Configuration& config, const DynamicModel& model) {
  check_dimensions(config, model.kinematics);
  return detail::joint_mass_matrix(config.joints, model);
}

inline constexpr double kCoriolisStep = 1e-6;

/// Partial derivatives dM/dq_m,k by central differences.
inline std::vector<MatX> mass_matrix_gradient(const Configuration& config, const DynamicModel& model,
                                              double h = kCoriolisStep) {
  check_dimensions(config, model.kinematics);
  std::vector<MatX> grad;
  grad.reserve(model.kinematics.joint_count());
  for (Eigen::Index k = 0; k < config.joints.size(); ++k) {
    VecX qp = config.joints, qm = config.joints;
    qp[k] += h;
    qm[k] -= h;
    grad.push_back((detail::joint_mass_matrix(qp, model) - detail::joint_mass_matrix(qm, model)) / (2.0 * h));
  }
  return grad;
}

/**
 * Coriolis/centripetal matrix.
 *
 * C = C_chr + C_x where C_chr holds the Christoffel symbols of M over the joint angles
 * and C_x is the skew floating-base block [[0, -S(p_v)], [-S(p_v), -S(p_w)]] with
 * [p_v; p_w] the vehicle rows of M zeta.
 */
inline MatX coriolis_matrix(const Configuration& config, const VecX& zeta, const DynamicModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dof());
  if (zeta.size() != n) throw ModelError("velocity dimension mismatch");
  const MatX m = mass_matrix(config, model);
  const std::vector<MatX> dm = mass_matrix_gradient(config, model);
  const auto v0 = static_cast<Eigen::Index>(kVehicleDof);

  MatX c = MatX::Zero(n, n);
  for (std::size_t k = 0; k < dm.size(); ++k) {
    c += 0.5 * zeta[v0 + static_cast<Eigen::Index>(k)] * dm[k];
  }
  // 0.5 (dM_ik/dq_j - dM_jk/dq_i) zeta_k, with only joint coordinates j, i contributing
  for (std::size_t k = 0; k < dm.size(); ++k) {
    const Eigen::Index idx = v0 + static_cast<Eigen::Index>(k);
    const VecX dz = dm[k] * zeta;
    c.col(idx) += 0.5 * dz;
    c.row(idx) -= 0.5 * dz.transpose();
  }

  const Vec6 p = m.topRows<6>() * zeta;
  c.block<3, 3>(0, 3) -= skew(p.head<3>());
  c.block<3, 3>(3, 0) -= skew(p.head<3>());
  c.block<3, 3>(3, 3) -= skew(p.tail<3>());
  return c;
}

inline VecX damping_force(const VecX& zeta, const DynamicModel& model) {
  return (model.linear_drag.array() + model.quadratic_drag.array() * zeta.array().abs()) * zeta.array();
}

/// Generalized force that gravity and buoyancy apply to the system. The g(q) term of
/// the equation of motion is its negative.
inline VecX restoring_force(const Configuration& config, const DynamicModel& model) {
  check_dimensions(config, model.kinematics);
  const std::size_t n = model.dof();
  const ArmFrames f = arm_frames(config.joints, model.kinematics);
  const Vec3 down = rotation_from_euler(config.vehicle.euler).transpose() * Vec3::UnitZ();
  VecX q = VecX::Zero(static_cast<Eigen::Index>(n));

  auto apply = [&](int body, const Vec3& point, const Vec3& force) {
    q.noalias() += detail::point_jacobian(f, body, point, n).linear.transpose() * force;
  };
  const double g = model.gravity;
  const RigidBody& v = model.vehicle;
  apply(-1, v.center_of_gravity, v.mass * g * down);
  apply(-1, v.center_of_buoyancy, -model.fluid_density * v.displaced_volume * g * down);
  for (std::size_t i = 0; i < model.links.size(); ++i) {
    const RigidBody& b = model.links[i];
    apply(static_cast<int>(i), detail::link_point(f, i, b.center_of_gravity), b.mass * g * down);
    apply(static_cast<int>(i), detail::link_point(f, i, b.center_of_buoyancy),
          -model.fluid_density * b.displaced_volume * g * down);
  }
  return q;
}

/// Gravity plus buoyancy potential (NED: z points down).
inline double potential_energy(const Configuration& config, const DynamicModel& model) {
  check_dimensions(config, model.kinematics);
  const ArmFrames f = arm_frames(config.joints, model.kinematics);
  const Mat3 rv = rotation_from_euler(config.vehicle.euler);
  auto depth = [&](const Vec3& body_point) { return config.vehicle.position.z() + (rv * body_point).z(); };
  const double g = model.gravity, rho = model.fluid_density;
  const RigidBody& v = model.vehicle;
  double e = -v.mass * g * depth(v.center_of_gravity) + rho * v.displaced_volume * g * depth(v.center_of_buoyancy);
  for (std::size_t i = 0; i < model.links.size(); ++i) {
    const RigidBody& b = model.links[i];
    e += -b.mass * g * depth(detail::link_point(f, i, b.center_of_gravity));
    e += rho * b.displaced_volume * g * depth(detail::link_point(f, i, b.center_of_buoyancy));
  }
  return e;
}

inline double kinetic_energy(const Configuration& config, const VecX& zeta, const DynamicModel& model) {
  return 0.5 * zeta.dot(mass_matrix(config, model) * zeta);
}

/**
 * zeta_dot = M^-1 (tau - C zeta - D zeta - g - Jg^T lambda - delta), via Cholesky.
 *
 * `exerted` is the wrench the end effector exerts on the environment.
 */
inline VecX forward_dynamics(const Configuration& config, const VecX& zeta, const VecX& tau,
                             const Wrench& exerted, const VecX& disturbance, const DynamicModel& model) {
  const auto n = static_cast<Eigen::Index>(model.dof());
  if (zeta.size() != n || tau.size() != n || disturbance.size() != n) {
    throw ModelError("forward_dynamics: vector dimension mismatch (n = " + std::to_string(n) + ")");
  }
  const MatX m = mass_matrix(config, model);
  VecX rhs = tau + restoring_force(config, model) - coriolis_matrix(config, zeta, model) * zeta -
             damping_force(zeta, model) - disturbance;
  if (exerted.force.squaredNorm() > 0.0 || exerted.torque.squaredNorm() > 0.0) {
    rhs.noalias() -= geometric_jacobian(config, model.kinematics).transpose() * exerted.stacked();
  }
  Eigen::LLT<MatX> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ModelError("mass matrix factorization failed: model is misconfigured");
  }
  return llt.solve(rhs);
}

/// Classical fourth-order Runge-Kutta step for y' = f(t, y).
template <class Vector, class Derivative>
Vector rk4_step(const Vector& y, double t, double h, Derivative&& f) {
  const Vector k1 = f(t, y);
  const Vector k2 = f(t + 0.5 * h, Vector(y + (0.5 * h) * k1));
  const Vector k3 = f(t + 0.5 * h, Vector(y + (0.5 * h) * k2));
  const Vector k4 = f(t + h, Vector(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Plant inputs held over one integration step. Contact and disturbance are evaluated
/// at every stage; tau is held constant.
struct PlantInputs {
  VecX tau;
  std::function<Wrench(const Configuration&)> exerted_wrench;  ///< empty: no contact
  std::function<VecX(double)> disturbance;                     ///< empty: zero
};

/// [eta1; eta2; q_m; zeta]
inline VecX pack_state(const SystemState& s) {
  const Eigen::Index nj = s.config.joints.size();
  VecX y(2 * (6 + nj));
  y << s.config.vehicle.position, s.config.vehicle.euler, s.config.joints, s.velocity;
  return y;
}

inline SystemState unpack_state(const VecX& y, std::size_t joint_count) {
  const auto nj = static_cast<Eigen::Index>(joint_count);
  SystemState s;
  s.config.vehicle.position = y.segment<3>(0);
  s.config.vehicle.euler = y.segment<3>(3);
  s.config.joints = y.segment(6, nj);
  s.velocity = y.segment(6 + nj, 6 + nj);
  return s;
}

/// Time derivative of the packed state.
inline VecX plant_derivative(double t, const VecX& y, const PlantInputs& in, const DynamicModel& model) {
  const std::size_t nj = model.kinematics.joint_count();
  const auto n = static_cast<Eigen::Index>(model.dof());
  const SystemState s = unpack_state(y, nj);
  const Wrench w = in.exerted_wrench ? in.exerted_wrench(s.config) : Wrench{};
  const VecX delta = in.disturbance ? in.disturbance(t) : VecX::Zero(n);

  VecX dy(2 * n);
  dy.head<6>() = vehicle_jacobian(s.config.vehicle) * s.velocity.head<6>();
  dy.segment(6, n - 6) = s.velocity.tail(n - 6);
  dy.tail(n) = forward_dynamics(s.config, s.velocity, in.tau, w, delta, model);
  return dy;
}

/// One RK4 step of the coupled kinematics and dynamics; attitude is re-wrapped.
inline SystemState step_plant(const SystemState& state, double t, double h, const PlantInputs& in,
                              const DynamicModel& model) {
  if (!(h > 0.0)) throw ValidationError("integration step must be positive");
  const VecX y0 = pack_state(state);
  if (!y0.allFinite()) throw NonFiniteStateError("non-finite state before step at t = " + std::to_string(t));
  const VecX y1 = rk4_step(y0, t, h, [&](double ts, const VecX& ys) { return plant_derivative(ts, ys, in, model); });
  if (!y1.allFinite()) {
    std::ostringstream os;
    os.precision(17);
    os << "non-finite state after step at t = " << t << "; previous state " << y0.transpose();
    throw NonFiniteStateError(os.str());
  }
  SystemState out = unpack_state(y1, model.kinematics.joint_count());
  out.config.vehicle = out.config.vehicle.wrapped();
  return out;
}

}  // namespace uvms

#endif  // UVMS_PPC_DYNAMICS_HPP_
