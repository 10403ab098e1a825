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
 * @file kinematics.hpp
 * @brief Frame transforms and Jacobians of a floating vehicle carrying a serial arm.
 *
 * Conventions:
 *   - inertial frame is North-East-Down, vehicle attitude is ZYX Euler (roll, pitch, yaw)
 *   - generalized velocity zeta = [v_body; omega_body; joint rates]
 *   - task coordinates x_e = [end-effector position (inertial); end-effector Euler angles]
 *   - the geometric Jacobian stacks the inertial linear velocity of the end effector on
 *     top of its angular velocity expressed in the end-effector frame, which is the
 *     quantity the Euler-rate matrix maps onto.
 */

#ifndef UVMS_PPC_KINEMATICS_HPP_
#define UVMS_PPC_KINEMATICS_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "uvms_ppc/types.hpp"

namespace uvms {

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

struct VehiclePose {
  Vec3 position = Vec3::Zero();  ///< eta1 = [x, y, z], inertial, m
  Vec3 euler = Vec3::Zero();     ///< eta2 = [phi, theta, psi], rad

  VehiclePose wrapped() const {
    VehiclePose p = *this;
    for (int i = 0; i < 3; ++i) p.euler[i] = wrap_angle(p.euler[i]);
    return p;
  }
};

/// Vehicle pose plus manipulator joint angles (q = [q_a; q_m]).
struct Configuration {
  VehiclePose vehicle;
  VecX joints;

  std::size_t dof() const { return kVehicleDof + static_cast<std::size_t>(joints.size()); }
};

struct JointSpec {
  std::string name;
  Vec3 axis = Vec3::UnitZ();         ///< revolute axis in the joint's parent frame
  Vec3 parent_offset = Vec3::Zero(); ///< joint origin relative to the parent frame
  double lower = -std::numbers::pi;
  double upper = std::numbers::pi;
};

/// Serial revolute chain mounted on the vehicle body frame.
struct KinematicModel {
  std::vector<JointSpec> joints;
  Vec3 tool_offset = Vec3::Zero();  ///< end-effector point in the last joint frame
  double pitch_margin = 0.1;        ///< keep |theta| < pi/2 - margin for the vehicle

  std::size_t joint_count() const { return joints.size(); }
  std::size_t dof() const { return kVehicleDof + joints.size(); }
};

/// Rotation from ZYX Euler angles: R = Rz(psi) Ry(theta) Rx(phi).
inline Mat3 rotation_from_euler(const Vec3& euler) {
  return (Eigen::AngleAxisd(euler[2], Vec3::UnitZ()) *
          Eigen::AngleAxisd(euler[1], Vec3::UnitY()) *
          Eigen::AngleAxisd(euler[0], Vec3::UnitX()))
      .toRotationMatrix();
}

/// ZYX Euler angles of a rotation matrix, theta in [-pi/2, pi/2].
inline Vec3 euler_from_rotation(const Mat3& r) {
  const double s = std::clamp(-r(2, 0), -1.0, 1.0);
  return {std::atan2(r(2, 1), r(2, 2)), std::asin(s), std::atan2(r(1, 0), r(0, 0))};
}

/// Maps Euler-angle rates to body angular velocity (the J'' block).
inline Mat3 euler_rate_matrix(const Vec3& euler) {
  const double sphi = std::sin(euler[0]), cphi = std::cos(euler[0]);
  const double sth = std::sin(euler[1]), cth = std::cos(euler[1]);
  Mat3 m;
  m << 1.0, 0.0, -sth,
       0.0, cphi, cth * sphi,
       0.0, -sphi, cth * cphi;
  return m;
}

inline constexpr double kEulerSingularityTolerance = 1e-6;

/// Inverse of euler_rate_matrix in closed form: body angular velocity to Euler rates.
inline Mat3 euler_rate_inverse(const Vec3& euler) {
  const double cth = std::cos(euler[1]);
  if (std::abs(cth) < kEulerSingularityTolerance) {
    throw SingularityError("Euler-angle singularity: |cos(theta)| = " + std::to_string(std::abs(cth)));
  }
  const double sphi = std::sin(euler[0]), cphi = std::cos(euler[0]);
  const double tth = std::tan(euler[1]);
  Mat3 m;
  m << 1.0, sphi * tth, cphi * tth,
       0.0, cphi, -sphi,
       0.0, sphi / cth, cphi / cth;
  return m;
}

/// Body-to-inertial velocity map J^a = blockdiag(J_t, J_r).
inline Mat6 vehicle_jacobian(const VehiclePose& pose) {
  Mat6 ja = Mat6::Zero();
  ja.topLeftCorner<3, 3>() = rotation_from_euler(pose.euler);
  ja.bottomRightCorner<3, 3>() = euler_rate_inverse(pose.euler);
  return ja;
}

/// Joint frames of the arm expressed in the vehicle body frame.
struct ArmFrames {
  std::vector<Vec3> origins;  ///< joint i origin
  std::vector<Vec3> axes;     ///< joint i axis (unit)
  std::vector<Mat3> rotations;  ///< orientation of link i (after joint i rotates)
  Vec3 tool_position = Vec3::Zero();
  Mat3 tool_rotation = Mat3::Identity();
};

inline void check_dimensions(const Configuration& config, const KinematicModel& model) {
  if (static_cast<std::size_t>(config.joints.size()) != model.joint_count()) {
    throw ModelError("configuration has " + std::to_string(config.joints.size()) +
                     " joints, model has " + std::to_string(model.joint_count()));
  }
}

inline ArmFrames arm_frames(const VecX& joints, const KinematicModel& model) {
  ArmFrames f;
  const std::size_t nj = model.joint_count();
  f.origins.reserve(nj);
  f.axes.reserve(nj);
  f.rotations.reserve(nj);
  Mat3 r = Mat3::Identity();
  Vec3 p = Vec3::Zero();
  for (std::size_t i = 0; i < nj; ++i) {
    const JointSpec& js = model.joints[i];
    p += r * js.parent_offset;
    f.origins.push_back(p);
    f.axes.push_back(r * js.axis);
    r = r * Eigen::AngleAxisd(joints[static_cast<Eigen::Index>(i)], js.axis).toRotationMatrix();
    f.rotations.push_back(r);
  }
  f.tool_position = p + r * model.tool_offset;
  f.tool_rotation = r;
  return f;
}

struct EndEffectorPose {
  Vec3 position;  ///< inertial
  Mat3 rotation;  ///< end-effector frame to inertial
  Vec3 euler;

  Vec6 task_coordinates() const {
    Vec6 x;
    x << position, euler;
    return x;
  }
};

inline EndEffectorPose end_effector_pose(const Configuration& config, const KinematicModel& model) {
  check_dimensions(config, model);
  const ArmFrames f = arm_frames(config.joints, model);
  const Mat3 rv = rotation_from_euler(config.vehicle.euler);
  EndEffectorPose e;
  e.position = config.vehicle.position + rv * f.tool_position;
  e.rotation = rv * f.tool_rotation;
  e.euler = euler_from_rotation(e.rotation);
  return e;
}

/**
 * Geometric Jacobian J^g (6 x n).
 *
 * Linear rows: inertial end-effector velocity. Vehicle columns are the rigid-body
 * transport R_v [I, -S(r_e)], joint columns R_v (z_i x (r_e - p_i)).
 * Angular rows: end-effector angular velocity in the end-effector frame.
 */
inline Mat6X geometric_jacobian(const Configuration& config, const KinematicModel& model) {
  check_dimensions(config, model);
  const std::size_t n = model.dof();
  const ArmFrames f = arm_frames(config.joints, model);
  const Mat3 rv = rotation_from_euler(config.vehicle.euler);
  const Mat3 arm_t = f.tool_rotation.transpose();

  Mat6X jg = Mat6X::Zero(6, static_cast<Eigen::Index>(n));
  jg.block<3, 3>(0, 0) = rv;
  jg.block<3, 3>(0, 3) = -rv * skew(f.tool_position);
  jg.block<3, 3>(3, 3) = arm_t;
  for (std::size_t i = 0; i < model.joint_count(); ++i) {
    const auto col = static_cast<Eigen::Index>(kVehicleDof + i);
    jg.block<3, 1>(0, col) = rv * f.axes[i].cross(f.tool_position - f.origins[i]);
    jg.block<3, 1>(3, col) = arm_t * f.axes[i];
  }
  return jg;
}

/// J' = blockdiag(I, J'') evaluated at the end-effector attitude.
inline Mat6 task_rate_matrix(const Vec3& end_effector_euler) {
  Mat6 jp = Mat6::Identity();
  jp.bottomRightCorner<3, 3>() = euler_rate_matrix(end_effector_euler);
  return jp;
}

/// Analytical Jacobian J = (J')^-1 J^g, mapping zeta to d/dt [position; Euler angles].
inline Mat6X analytical_jacobian(const Configuration& config, const KinematicModel& model) {
  const EndEffectorPose ee = end_effector_pose(config, model);
  Mat6X j = geometric_jacobian(config, model);
  j.bottomRows<3>() = euler_rate_inverse(ee.euler) * j.bottomRows<3>();
  return j;
}

struct JacobianSet {
  Mat6 vehicle;     ///< J^a
  Mat6X geometric;  ///< J^g
  Mat6 rate;        ///< J'
  Mat6X analytical; ///< J
};

inline JacobianSet jacobian_set(const Configuration& config, const KinematicModel& model) {
  const EndEffectorPose ee = end_effector_pose(config, model);
  JacobianSet s;
  s.vehicle = vehicle_jacobian(config.vehicle);
  s.geometric = geometric_jacobian(config, model);
  s.rate = task_rate_matrix(ee.euler);
  s.analytical = s.geometric;
  s.analytical.bottomRows<3>() = euler_rate_inverse(ee.euler) * s.geometric.bottomRows<3>();
  return s;
}

inline constexpr double kPseudoInverseTolerance = 1e-8;

/// Moore-Penrose pseudo-inverse via SVD; singular values below tol * sigma_max are dropped.
inline MatX pseudo_inverse(const MatX& a, double tol = kPseudoInverseTolerance) {
  if (a.size() == 0) return MatX::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<MatX> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX& s = svd.singularValues();
  const double cutoff = tol * (s.size() > 0 ? s[0] : 0.0);
  VecX s_inv = VecX::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) s_inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

/// zeta_r = J+ x_dot_r + (I - J+ J) x_dot_0.
inline VecX nullspace_projected_velocity(const MatX& j, const Vec6& task_velocity,
                                         const VecX& secondary_velocity) {
  const MatX jp = pseudo_inverse(j);
  const VecX primary = jp * task_velocity;
  if (secondary_velocity.size() == 0) return primary;
  if (secondary_velocity.size() != j.cols()) {
    throw ModelError("secondary velocity has dimension " + std::to_string(secondary_velocity.size()) +
                     ", expected " + std::to_string(j.cols()));
  }
  return primary + secondary_velocity - jp * (j * secondary_velocity);
}

/// Checks joint count, joint limits and the vehicle pitch margin.
inline void validate_configuration(const Configuration& config, const KinematicModel& model) {
  check_dimensions(config, model);
  if (model.joint_count() < 1) throw ModelError("model needs at least one joint (n >= 7)");
  const double max_pitch = std::numbers::pi / 2.0 - model.pitch_margin;
  if (std::abs(config.vehicle.euler[1]) >= max_pitch) {
    throw ValidationError("vehicle pitch " + std::to_string(config.vehicle.euler[1]) +
                          " rad is within the Euler singularity margin");
  }
  for (std::size_t i = 0; i < model.joint_count(); ++i) {
    const double q = config.joints[static_cast<Eigen::Index>(i)];
    const JointSpec& js = model.joints[i];
    if (q < js.lower || q > js.upper) {
      throw ValidationError("joint '" + js.name + "' angle " + std::to_string(q) +
                            " outside [" + std::to_string(js.lower) + ", " +
                            std::to_string(js.upper) + "]");
    }
  }
}

}  // namespace uvms

#endif  // UVMS_PPC_KINEMATICS_HPP_
