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

// Model file reading/writing (YAML) and the built-in reference vehicle-manipulator.
// Schema: docs/model_format.md

#ifndef UVMS_PPC_MODEL_IO_HPP_
#define UVMS_PPC_MODEL_IO_HPP_

#include <charconv>
#include <numbers>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "uvms_ppc/dynamics.hpp"
#include "uvms_ppc/kinematics.hpp"
#include "uvms_ppc/types.hpp"

namespace uvms {

namespace yaml {

inline std::string where(const YAML::Node& node, const std::string& key) {
  const auto m = node.Mark();
  return "'" + key + "'" + (m.line >= 0 ? " (line " + std::to_string(m.line + 1) + ")" : std::string());
}

inline YAML::Node require(const YAML::Node& node, const std::string& key) {
  const YAML::Node child = node[key];
  if (!child) throw ValidationError("missing key " + where(node, key));
  return child;
}

inline double number(const YAML::Node& node, const std::string& key) {
  try {
    return require(node, key).as<double>();
  } catch (const YAML::Exception& e) {
    throw ValidationError("key " + where(node, key) + " is not a number");
  }
}

inline double number_or(const YAML::Node& node, const std::string& key, double fallback) {
  return node[key] ? number(node, key) : fallback;
}

inline std::vector<double> list(const YAML::Node& node, const std::string& key) {
  const YAML::Node child = require(node, key);
  try {
    if (child.IsScalar()) return {child.as<double>()};
    return child.as<std::vector<double>>();
  } catch (const YAML::Exception& e) {
    throw ValidationError("key " + where(node, key) + " is not a list of numbers");
  }
}

/// Fixed-size vector; a scalar broadcasts to every entry.
inline VecX vector(const YAML::Node& node, const std::string& key, Eigen::Index size) {
  const std::vector<double> v = list(node, key);
  VecX out(size);
  if (v.size() == 1) {
    out.setConstant(v[0]);
  } else if (static_cast<Eigen::Index>(v.size()) == size) {
    for (Eigen::Index i = 0; i < size; ++i) out[i] = v[static_cast<std::size_t>(i)];
  } else {
    throw ValidationError("key " + where(node, key) + " needs " + std::to_string(size) + " entries, got " +
                          std::to_string(v.size()));
  }
  return out;
}

inline Vec3 vec3(const YAML::Node& node, const std::string& key) { return vector(node, key, 3); }

/// 3 entries: diagonal; 9 entries: row-major.
inline Mat3 inertia(const YAML::Node& node, const std::string& key) {
  const std::vector<double> v = list(node, key);
  if (v.size() == 3) return Vec3(v[0], v[1], v[2]).asDiagonal();
  if (v.size() == 9) return Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v.data());
  throw ValidationError("key " + where(node, key) + " needs 3 (diagonal) or 9 entries");
}

/// 6 entries: diagonal; 36 entries: row-major.
inline Mat6 mat6(const YAML::Node& node, const std::string& key) {
  const std::vector<double> v = list(node, key);
  if (v.size() == 6) return Vec6(Eigen::Map<const Vec6>(v.data())).asDiagonal();
  if (v.size() == 36) return Eigen::Map<const Eigen::Matrix<double, 6, 6, Eigen::RowMajor>>(v.data());
  throw ValidationError("key " + where(node, key) + " needs 6 (diagonal) or 36 entries");
}

/// Shortest text that parses back to exactly `v`.
inline YAML::Node real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return YAML::Node(std::string(buf, res.ptr));
}

template <class Derived>
YAML::Node sequence(const Eigen::MatrixBase<Derived>& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  const auto ev = v.eval();
  for (Eigen::Index i = 0; i < ev.size(); ++i) n.push_back(real(ev(i)));
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

inline YAML::Node matrix_node(const MatX& m) {
  if (m.isDiagonal(0.0)) return sequence(VecX(m.diagonal()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  return sequence(Eigen::Map<const VecX>(rm.data(), rm.size()));
}

}  // namespace yaml

inline RigidBody body_from_yaml(const YAML::Node& node) {
  RigidBody b;
  b.mass = yaml::number(node, "mass");
  b.center_of_gravity = node["center_of_gravity"] ? yaml::vec3(node, "center_of_gravity") : Vec3::Zero();
  b.inertia = yaml::inertia(node, "inertia");
  b.displaced_volume = yaml::number_or(node, "displaced_volume", 0.0);
  b.center_of_buoyancy =
      node["center_of_buoyancy"] ? yaml::vec3(node, "center_of_buoyancy") : b.center_of_gravity;
  return b;
}

inline YAML::Node body_to_yaml(const RigidBody& b) {
  YAML::Node n;
  n["mass"] = yaml::real(b.mass);
  n["center_of_gravity"] = yaml::sequence(b.center_of_gravity);
  n["inertia"] = yaml::matrix_node(b.inertia);
  n["displaced_volume"] = yaml::real(b.displaced_volume);
  n["center_of_buoyancy"] = yaml::sequence(b.center_of_buoyancy);
  return n;
}

/// Parses and validates a model; joint axes are normalized.
inline DynamicModel model_from_yaml(const YAML::Node& root) {
  DynamicModel m;
  m.fluid_density = yaml::number_or(root, "fluid_density", 1000.0);
  m.gravity = yaml::number_or(root, "gravity", 9.81);
  m.kinematics.pitch_margin = yaml::number_or(root, "pitch_margin", 0.1);
  m.kinematics.tool_offset = root["tool_offset"] ? yaml::vec3(root, "tool_offset") : Vec3::Zero();

  const YAML::Node veh = yaml::require(root, "vehicle");
  m.vehicle = body_from_yaml(veh);
  m.added_mass = veh["added_mass"] ? yaml::mat6(veh, "added_mass") : Mat6::Zero();
  const VecX vlin = veh["linear_drag"] ? yaml::vector(veh, "linear_drag", 6) : VecX::Zero(6);
  const VecX vquad = veh["quadratic_drag"] ? yaml::vector(veh, "quadratic_drag", 6) : VecX::Zero(6);

  const YAML::Node joints = yaml::require(root, "joints");
  if (!joints.IsSequence() || joints.size() == 0) throw ValidationError("'joints' must be a non-empty list");
  const auto nj = static_cast<Eigen::Index>(joints.size());
  m.armature = VecX::Zero(nj);
  m.linear_drag = VecX::Zero(6 + nj);
  m.quadratic_drag = VecX::Zero(6 + nj);
  m.linear_drag.head<6>() = vlin;
  m.quadratic_drag.head<6>() = vquad;

  for (Eigen::Index i = 0; i < nj; ++i) {
    const YAML::Node jn = joints[static_cast<std::size_t>(i)];
    JointSpec js;
    js.name = jn["name"] ? jn["name"].as<std::string>() : "joint" + std::to_string(i + 1);
    js.axis = yaml::vec3(jn, "axis");
    if (js.axis.norm() == 0.0) throw ModelError("joint '" + js.name + "' has a zero axis");
    js.axis.normalize();
    js.parent_offset = yaml::vec3(jn, "parent_offset");
    if (jn["limits"]) {
      const VecX lim = yaml::vector(jn, "limits", 2);
      js.lower = lim[0];
      js.upper = lim[1];
    }
    m.kinematics.joints.push_back(js);
    m.armature[i] = yaml::number_or(jn, "armature", 0.0);
    m.linear_drag[6 + i] = yaml::number_or(jn, "linear_drag", 0.0);
    m.quadratic_drag[6 + i] = yaml::number_or(jn, "quadratic_drag", 0.0);
    m.links.push_back(body_from_yaml(yaml::require(jn, "link")));
  }
  validate_model(m);
  return m;
}

inline YAML::Node model_to_yaml(const DynamicModel& m) {
  YAML::Node root;
  root["fluid_density"] = yaml::real(m.fluid_density);
  root["gravity"] = yaml::real(m.gravity);
  root["pitch_margin"] = yaml::real(m.kinematics.pitch_margin);
  YAML::Node veh = body_to_yaml(m.vehicle);
  veh["added_mass"] = yaml::matrix_node(m.added_mass);
  veh["linear_drag"] = yaml::sequence(VecX(m.linear_drag.head<6>()));
  veh["quadratic_drag"] = yaml::sequence(VecX(m.quadratic_drag.head<6>()));
  root["vehicle"] = veh;
  YAML::Node joints(YAML::NodeType::Sequence);
  for (std::size_t i = 0; i < m.kinematics.joints.size(); ++i) {
    const JointSpec& js = m.kinematics.joints[i];
    const auto idx = static_cast<Eigen::Index>(i);
    YAML::Node jn;
    jn["name"] = js.name;
    jn["axis"] = yaml::sequence(js.axis);
    jn["parent_offset"] = yaml::sequence(js.parent_offset);
    jn["limits"] = yaml::sequence(Eigen::Vector2d(js.lower, js.upper));
    jn["armature"] = yaml::real(m.armature[idx]);
    jn["linear_drag"] = yaml::real(m.linear_drag[6 + idx]);
    jn["quadratic_drag"] = yaml::real(m.quadratic_drag[6 + idx]);
    jn["link"] = body_to_yaml(m.links[i]);
    joints.push_back(jn);
  }
  root["joints"] = joints;
  root["tool_offset"] = yaml::sequence(m.kinematics.tool_offset);
  return root;
}

inline DynamicModel load_model(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ValidationError("cannot open model file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ValidationError("model file '" + path + "': " + e.what());
  }
  return model_from_yaml(root);
}

namespace detail {

inline RigidBody slender_link(double mass, double length, double radius, double volume) {
  RigidBody b;
  b.mass = mass;
  b.center_of_gravity = Vec3(0.5 * length, 0.0, 0.0);
  const double axial = 0.5 * mass * radius * radius;
  const double transverse = mass * (3.0 * radius * radius + length * length) / 12.0;
  b.inertia = Vec3(axial, transverse, transverse).asDiagonal();
  b.displaced_volume = volume;
  b.center_of_buoyancy = b.center_of_gravity;
  return b;
}

}  // namespace detail

/**
 * Small observation-class ROV with a yaw-pitch-pitch-pitch arm (link lengths
 * 0.25/0.25/0.20/0.15 m) mounted under the bow. The arm joints carry reflected
 * gearmotor inertia.
 */
inline DynamicModel reference_uvms_model() {
  DynamicModel m;
  m.fluid_density = 1000.0;
  m.gravity = 9.81;

  m.vehicle.mass = 11.5;
  m.vehicle.center_of_gravity = Vec3::Zero();
  m.vehicle.inertia = Vec3(0.6, 0.9, 0.9).asDiagonal();
  m.vehicle.displaced_volume = 0.0118;
  m.vehicle.center_of_buoyancy = Vec3(0.0, 0.0, -0.05);
  m.added_mass = (Vec6() << 6.0, 8.0, 10.0, 0.4, 0.6, 0.6).finished().asDiagonal();

  constexpr double kPi = std::numbers::pi;
  const std::vector<JointSpec> joints = {
      {"shoulder_yaw", Vec3::UnitZ(), Vec3(0.35, 0.0, 0.12), -kPi, kPi},
      {"shoulder_pitch", Vec3::UnitY(), Vec3(0.25, 0.0, 0.0), -3.0, 3.0},
      {"elbow_pitch", Vec3::UnitY(), Vec3(0.25, 0.0, 0.0), -3.0, 3.0},
      {"wrist_pitch", Vec3::UnitY(), Vec3(0.20, 0.0, 0.0), -3.0, 3.0},
  };
  m.kinematics.joints = joints;
  m.kinematics.tool_offset = Vec3(0.15, 0.0, 0.0);
  m.kinematics.pitch_margin = 0.1;

  m.links = {
      detail::slender_link(0.8, 0.25, 0.03, 0.0007),
      detail::slender_link(0.7, 0.25, 0.03, 0.0006),
      detail::slender_link(0.5, 0.20, 0.025, 0.00045),
      detail::slender_link(0.3, 0.15, 0.02, 0.00025),
  };
  m.armature = (VecX(4) << 0.5, 0.5, 0.4, 0.3).finished();
  m.linear_drag = (VecX(10) << 8.0, 10.0, 12.0, 1.5, 2.0, 2.0, 1.0, 1.0, 1.0, 1.0).finished();
  m.quadratic_drag = (VecX(10) << 20.0, 30.0, 35.0, 1.0, 1.5, 1.5, 0.5, 0.5, 0.5, 0.5).finished();
  return m;
}

}  // namespace uvms

#endif  // UVMS_PPC_MODEL_IO_HPP_
