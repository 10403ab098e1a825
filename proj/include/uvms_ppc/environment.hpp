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

// Compliant contact surface, reference generators, disturbance and sensor noise.
// Everything here is a pure function of its arguments (and a seed).

#ifndef UVMS_PPC_ENVIRONMENT_HPP_
#define UVMS_PPC_ENVIRONMENT_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "uvms_ppc/types.hpp"

namespace uvms {

/// Planar spring wall. `normal` is the outward unit normal, pointing away from the
/// material toward the free side.
struct CompliantPlane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();
  Mat3 stiffness = 2.0 * Mat3::Identity();  ///< N/m, diagonal

  void validate() const {
    if (std::abs(normal.norm() - 1.0) > 1e-9) throw ValidationError("contact normal must be a unit vector");
    if (!stiffness.isDiagonal(0.0)) throw ValidationError("contact stiffness must be diagonal");
    if ((stiffness.diagonal().array() < 0.0).any()) throw ValidationError("contact stiffness must be >= 0");
  }
};

inline double penetration_depth(const Vec3& p, const CompliantPlane& plane) {
  return std::max(0.0, (plane.point - p).dot(plane.normal));
}

/// Reaction the wall applies to the end effector: K_f d n, zero out of contact. The
/// wrench the robot exerts on the wall is its negative.
inline Wrench contact_force(const Vec3& end_effector_position, const CompliantPlane& plane) {
  const double d = penetration_depth(end_effector_position, plane);
  Wrench w;
  if (d > 0.0) w.force = plane.stiffness * (d * plane.normal);
  return w;
}

/// Time profile of a scalar reference.
struct ScalarProfile {
  enum class Kind { kConstant, kSinusoid, kRamp };
  Kind kind = Kind::kConstant;
  double offset = 0.0;     ///< constant value / sinusoid mean / ramp start
  double amplitude = 0.0;  ///< sinusoid amplitude
  double frequency = 0.0;  ///< sinusoid angular frequency, rad/s
  double phase = 0.0;      ///< sinusoid phase, rad
  double slope = 0.0;      ///< ramp rate, units/s
  double final_value = 0.0;  ///< ramp saturation value

  double value(double t) const {
    switch (kind) {
      case Kind::kSinusoid:
        return offset + amplitude * std::sin(frequency * t + phase);
      case Kind::kRamp: {
        const double v = offset + slope * t;
        return slope >= 0.0 ? std::min(v, final_value) : std::max(v, final_value);
      }
      case Kind::kConstant:
      default:
        return offset;
    }
  }
};

inline ScalarProfile constant_profile(double v) { return {ScalarProfile::Kind::kConstant, v}; }

inline ScalarProfile sinusoid_profile(double offset, double amplitude, double frequency, double phase = 0.0) {
  ScalarProfile p;
  p.kind = ScalarProfile::Kind::kSinusoid;
  p.offset = offset;
  p.amplitude = amplitude;
  p.frequency = frequency;
  p.phase = phase;
  return p;
}

/// Desired end-effector force, one profile per inertial axis.
struct ForceReference {
  std::array<ScalarProfile, 3> axes{};

  Vec3 operator()(double t) const { return {axes[0].value(t), axes[1].value(t), axes[2].value(t)}; }
};

/// f_d = [0.4 sin(pi t) + 0.4, 0, 0]
inline ForceReference paper_force_reference() {
  ForceReference r;
  r.axes[0] = sinusoid_profile(0.4, 0.4, std::numbers::pi);
  return r;
}

inline Vec3 desired_force(double t, const ForceReference& reference) { return reference(t); }

struct DisturbanceSpec {
  double amplitude = 0.15;                         ///< N
  double frequency = 2.0 * std::numbers::pi / 7.0; ///< rad/s
  std::vector<int> axes{0, 1, 2};                  ///< generalized-force indices

  void validate() const {
    if (amplitude < 0.0) throw ValidationError("disturbance amplitude must be >= 0");
    if (!std::isfinite(frequency)) throw ValidationError("disturbance frequency must be finite");
  }
};

/// delta(t): amplitude sin(frequency t) on the selected generalized axes.
inline VecX disturbance(double t, const DisturbanceSpec& spec, std::size_t n) {
  VecX d = VecX::Zero(static_cast<Eigen::Index>(n));
  const double v = spec.amplitude * std::sin(spec.frequency * t);
  for (int axis : spec.axes) {
    if (axis < 0 || static_cast<std::size_t>(axis) >= n) {
      throw ValidationError("disturbance axis " + std::to_string(axis) + " out of range");
    }
    d[axis] = v;
  }
  return d;
}

struct NoiseSpec {
  Vec3 bound = Vec3::Constant(0.01);  ///< N, per channel
  std::uint64_t seed = 1;

  void validate() const {
    if ((bound.array() < 0.0).any()) throw ValidationError("noise bound must be >= 0");
  }
};

/// Uniform noise in [-bound, bound] per channel; a pure function of (t, seed).
inline Vec3 force_noise(double t, const NoiseSpec& noise) {
  Vec3 out = Vec3::Zero();
  if ((noise.bound.array() == 0.0).all()) return out;
  const auto tb = std::bit_cast<std::uint64_t>(t);
  std::seed_seq seq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                    static_cast<std::uint32_t>(tb), static_cast<std::uint32_t>(tb >> 32)};
  std::mt19937_64 rng(seq);
  for (int i = 0; i < 3; ++i) {
    const double b = noise.bound[i];
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    out[i] = b == 0.0 ? 0.0 : std::clamp(b * (2.0 * u - 1.0), -b, b);
  }
  return out;
}

/// Force-sensor reading f_e + Delta f_e.
inline Vec3 measure_force(const Vec3& true_force, const NoiseSpec& noise, double t) {
  return true_force + force_noise(t, noise);
}

}  // namespace uvms

#endif  // UVMS_PPC_ENVIRONMENT_HPP_
