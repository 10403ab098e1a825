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

#ifndef UVMS_PPC_TYPES_HPP_
#define UVMS_PPC_TYPES_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace uvms {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using MatX = Eigen::MatrixXd;

/// Number of vehicle degrees of freedom at the front of every generalized vector.
inline constexpr std::size_t kVehicleDof = 6;

/// Euler-angle representation singularity (|cos(theta)| too small).
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent kinematic/dynamic model.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or controller configuration fails its preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrated state stopped being finite.
class NonFiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Force/torque pair at the end effector, lambda = [f_e; nu_e].
struct Wrench {
  Vec3 force = Vec3::Zero();   ///< N, inertial frame
  Vec3 torque = Vec3::Zero();  ///< N m, end-effector frame

  Vec6 stacked() const {
    Vec6 w;
    w << force, torque;
    return w;
  }
  Wrench operator-() const { return {-force, -torque}; }
};

/// Skew-symmetric cross-product matrix, S(a) b = a x b.
inline Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return s;
}

}  // namespace uvms

#endif  // UVMS_PPC_TYPES_HPP_
