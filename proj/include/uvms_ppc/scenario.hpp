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
 * @file scenario.hpp
 * @brief Closed-loop scenario description and its YAML file format.
 *
 * Schema: docs/scenario_format.md. The built-in contact-task scenario is
 * paper_scenario(); data/paper_scenario.yaml is the same thing on disk.
 */

#ifndef UVMS_PPC_SCENARIO_HPP_
#define UVMS_PPC_SCENARIO_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "uvms_ppc/controller.hpp"
#include "uvms_ppc/dynamics.hpp"
#include "uvms_ppc/environment.hpp"
#include "uvms_ppc/model_io.hpp"

namespace uvms {

struct ActuatorLimit {
  bool enabled = false;
  double bound = 200.0;  ///< |tau_j| <= bound
};

struct Scenario {
  std::string model_file;  ///< empty when the model is inline
  DynamicModel model;
  CompliantPlane contact;
  bool contact_point_auto = true;  ///< wall touches the initial end-effector position
  DisturbanceSpec disturbance;
  NoiseSpec noise;
  ForceReference desired_force;
  Vec3 desired_orientation = Vec3::Zero();
  ControllerConfig controller;
  SystemState initial;
  double duration = 10.0;  ///< s
  double step = 1e-3;      ///< s
  int log_decimation = 1;
  std::uint64_t seed = 1;
  ActuatorLimit actuator_limit;

  std::size_t dof() const { return model.dof(); }
};

/// Places the wall at the initial end-effector position when requested.
inline void resolve_contact_point(Scenario& s) {
  if (s.contact_point_auto) s.contact.point = end_effector_pose(s.initial.config, s.model.kinematics).position;
}

/// The velocity-level envelope (rho0, rho_inf, decay) used for all vehicle channels and
/// the joint channels respectively.
inline ControllerConfig paper_controller(std::size_t n) {
  ControllerConfig c;
  c.k_x = Vec6::Constant(0.2);
  c.k_zeta = VecX::Constant(static_cast<Eigen::Index>(n), 5.0);
  for (std::size_t j = 0; j < 6; ++j) c.perf_x[j] = {j < 3 ? 1.0 : 0.9, 0.2, 3.0};
  c.perf_zeta.resize(n);
  for (std::size_t j = 0; j < n; ++j) c.perf_zeta[j] = {1.0, j < 6 ? 0.2 : 0.4, 2.2};
  return c;
}

/// Contact task on the reference vehicle-manipulator: sinusoidal force on a 2 N/m wall
/// while regulating the end-effector attitude from (0.2, 0.2, -0.2) rad to zero.
inline Scenario paper_scenario() {
  Scenario s;
  s.model = reference_uvms_model();
  const std::size_t n = s.model.dof();
  s.contact.normal = Vec3(-1.0, 0.0, 0.0);
  s.contact.stiffness = 2.0 * Mat3::Identity();
  s.contact_point_auto = true;
  s.disturbance = DisturbanceSpec{};
  s.noise.bound = Vec3::Constant(0.01);
  s.desired_force = paper_force_reference();
  s.desired_orientation = Vec3::Zero();
  s.controller = paper_controller(n);
  s.initial.config.vehicle.position = Vec3::Zero();
  s.initial.config.vehicle.euler = Vec3(0.2, 0.2, -0.2);
  s.initial.config.joints = (VecX(4) << 0.0, 0.3, -0.6, 0.3).finished();
  s.initial.velocity = VecX::Zero(static_cast<Eigen::Index>(n));
  s.duration = 10.0;
  s.step = 1e-3;
  s.log_decimation = 1;
  s.seed = 1;
  s.noise.seed = s.seed;
  resolve_contact_point(s);
  return s;
}

/// Throws ValidationError (or ModelError) describing the first failed precondition.
inline void validate_scenario(const Scenario& s) {
  validate_model(s.model);
  const std::size_t n = s.dof();
  if (!(s.duration >= 0.0) || !std::isfinite(s.duration)) throw ValidationError("duration must be >= 0");
  if (!(s.step > 0.0)) throw ValidationError("step must be > 0");
  if (s.log_decimation < 1) throw ValidationError("log_decimation must be >= 1");
  if (s.actuator_limit.enabled && !(s.actuator_limit.bound > 0.0)) {
    throw ValidationError("actuator bound must be > 0");
  }
  s.contact.validate();
  s.disturbance.validate();
  for (int axis : s.disturbance.axes) {
    if (axis < 0 || static_cast<std::size_t>(axis) >= n) {
      throw ValidationError("disturbance axis " + std::to_string(axis) + " out of range");
    }
  }
  s.noise.validate();
  s.controller.validate(n);
  validate_configuration(s.initial.config, s.model.kinematics);
  if (static_cast<std::size_t>(s.initial.velocity.size()) != n) {
    throw ValidationError("initial velocity needs n = " + std::to_string(n) + " entries");
  }

  // Same sensor reading the first control step will see.
  const EndEffectorPose ee = end_effector_pose(s.initial.config, s.model.kinematics);
  const Wrench exerted = -contact_force(ee.position, s.contact);
  SensorReading sensor{measure_force(exerted.force, s.noise, 0.0), ee.euler};
  TaskReference ref{s.desired_force(0.0), s.desired_orientation};
  PpcController(s.controller, s.model.kinematics)
      .check_initial_conditions(sensor, ref, s.initial.config, s.initial.velocity, 0.0);
}

namespace detail {

inline ScalarProfile profile_from_yaml(const YAML::Node& node) {
  if (node.IsScalar()) return constant_profile(node.as<double>());
  const std::string type = node["type"] ? node["type"].as<std::string>() : "constant";
  ScalarProfile p;
  if (type == "constant") {
    p.kind = ScalarProfile::Kind::kConstant;
    p.offset = yaml::number(node, "value");
  } else if (type == "sinusoid") {
    p.kind = ScalarProfile::Kind::kSinusoid;
    p.offset = yaml::number_or(node, "offset", 0.0);
    p.amplitude = yaml::number(node, "amplitude");
    p.frequency = yaml::number(node, "frequency");
    p.phase = yaml::number_or(node, "phase", 0.0);
  } else if (type == "ramp") {
    p.kind = ScalarProfile::Kind::kRamp;
    p.offset = yaml::number_or(node, "start", 0.0);
    p.slope = yaml::number(node, "slope");
    p.final_value = yaml::number(node, "final");
  } else {
    throw ValidationError("unknown profile type '" + type + "'");
  }
  return p;
}

inline YAML::Node profile_to_yaml(const ScalarProfile& p) {
  YAML::Node n;
  switch (p.kind) {
    case ScalarProfile::Kind::kSinusoid:
      n["type"] = "sinusoid";
      n["offset"] = yaml::real(p.offset);
      n["amplitude"] = yaml::real(p.amplitude);
      n["frequency"] = yaml::real(p.frequency);
      n["phase"] = yaml::real(p.phase);
      break;
    case ScalarProfile::Kind::kRamp:
      n["type"] = "ramp";
      n["start"] = yaml::real(p.offset);
      n["slope"] = yaml::real(p.slope);
      n["final"] = yaml::real(p.final_value);
      break;
    case ScalarProfile::Kind::kConstant:
      n["type"] = "constant";
      n["value"] = yaml::real(p.offset);
      break;
  }
  return n;
}

inline std::vector<PerformanceFunction> envelopes_from_yaml(const YAML::Node& node, Eigen::Index size) {
  const VecX rho0 = yaml::vector(node, "rho0", size);
  const VecX rho_inf = yaml::vector(node, "rho_inf", size);
  const VecX decay = yaml::vector(node, "decay", size);
  std::vector<PerformanceFunction> out(static_cast<std::size_t>(size));
  for (Eigen::Index i = 0; i < size; ++i) out[static_cast<std::size_t>(i)] = {rho0[i], rho_inf[i], decay[i]};
  return out;
}

template <class Range>
YAML::Node envelopes_to_yaml(const Range& pfs) {
  VecX rho0(static_cast<Eigen::Index>(pfs.size())), rho_inf(rho0.size()), decay(rho0.size());
  Eigen::Index i = 0;
  for (const auto& pf : pfs) {
    rho0[i] = pf.rho0;
    rho_inf[i] = pf.rho_inf;
    decay[i] = pf.decay;
    ++i;
  }
  YAML::Node n;
  n["rho0"] = yaml::sequence(rho0);
  n["rho_inf"] = yaml::sequence(rho_inf);
  n["decay"] = yaml::sequence(decay);
  return n;
}

}  // namespace detail

/// `base_dir` resolves a relative model_file.
inline Scenario scenario_from_yaml(const YAML::Node& root, const std::filesystem::path& base_dir = {}) {
  Scenario s;
  if (root["model_file"]) {
    s.model_file = root["model_file"].as<std::string>();
    std::filesystem::path p(s.model_file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    s.model = load_model(p.string());
  } else if (root["model"]) {
    s.model = model_from_yaml(root["model"]);
  } else {
    throw ValidationError("scenario needs 'model_file' or an inline 'model'");
  }
  const auto n = static_cast<Eigen::Index>(s.model.dof());
  const auto nj = n - 6;

  s.duration = yaml::number_or(root, "duration", 10.0);
  s.step = yaml::number_or(root, "step", 1e-3);
  s.log_decimation = root["log_decimation"] ? root["log_decimation"].as<int>() : 1;
  s.seed = root["seed"] ? root["seed"].as<std::uint64_t>() : 1;

  const YAML::Node init = yaml::require(root, "initial_state");
  s.initial.config.vehicle.position = yaml::vec3(init, "vehicle_position");
  s.initial.config.vehicle.euler = yaml::vec3(init, "vehicle_euler");
  s.initial.config.joints = yaml::vector(init, "joints", nj);
  s.initial.velocity = init["velocity"] ? yaml::vector(init, "velocity", n) : VecX::Zero(n);

  const YAML::Node env = yaml::require(root, "environment");
  const YAML::Node contact = yaml::require(env, "contact");
  const YAML::Node point = yaml::require(contact, "point");
  s.contact_point_auto = point.IsScalar() && point.as<std::string>() == "auto";
  if (!s.contact_point_auto) s.contact.point = yaml::vec3(contact, "point");
  s.contact.normal = yaml::vec3(contact, "normal");
  s.contact.stiffness = yaml::vec3(contact, "stiffness").asDiagonal();

  if (const YAML::Node d = env["disturbance"]) {
    s.disturbance.amplitude = yaml::number(d, "amplitude");
    s.disturbance.frequency = yaml::number(d, "frequency");
    s.disturbance.axes = d["axes"] ? d["axes"].as<std::vector<int>>() : std::vector<int>{0, 1, 2};
  } else {
    s.disturbance.amplitude = 0.0;
  }
  if (const YAML::Node nz = env["noise"]) {
    s.noise.bound = yaml::vec3(nz, "bound");
  } else {
    s.noise.bound.setZero();
  }
  const YAML::Node fd = yaml::require(env, "desired_force");
  const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    s.desired_force.axes[static_cast<std::size_t>(i)] =
        fd[axes[i]] ? detail::profile_from_yaml(fd[axes[i]]) : constant_profile(0.0);
  }
  s.desired_orientation = env["desired_orientation"] ? yaml::vec3(env, "desired_orientation") : Vec3::Zero();

  const YAML::Node ctl = yaml::require(root, "controller");
  s.controller.k_x = yaml::vector(ctl, "k_x", 6);
  s.controller.k_zeta = yaml::vector(ctl, "k_zeta", n);
  const auto px = detail::envelopes_from_yaml(yaml::require(ctl, "task_envelopes"), 6);
  std::copy(px.begin(), px.end(), s.controller.perf_x.begin());
  s.controller.perf_zeta = detail::envelopes_from_yaml(yaml::require(ctl, "velocity_envelopes"), n);
  if (ctl["secondary_velocity"]) s.controller.secondary_velocity = yaml::vector(ctl, "secondary_velocity", n);

  if (const YAML::Node lim = root["actuator_limit"]) {
    s.actuator_limit.enabled = lim["enabled"] ? lim["enabled"].as<bool>() : true;
    s.actuator_limit.bound = yaml::number_or(lim, "bound", 200.0);
  }
  s.noise.seed = s.seed;
  resolve_contact_point(s);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ValidationError("cannot open scenario file '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ValidationError("scenario file '" + path + "': " + e.what());
  }
  try {
    return scenario_from_yaml(root, std::filesystem::path(path).parent_path());
  } catch (const YAML::Exception& e) {
    throw ValidationError("scenario file '" + path + "': " + e.what());
  }
}

/// When `inline_model` is false the model is referenced through model_file.
inline YAML::Node scenario_to_yaml(const Scenario& s, bool inline_model = true) {
  YAML::Node root;
  if (inline_model || s.model_file.empty()) {
    root["model"] = model_to_yaml(s.model);
  } else {
    root["model_file"] = s.model_file;
  }
  root["duration"] = yaml::real(s.duration);
  root["step"] = yaml::real(s.step);
  root["log_decimation"] = s.log_decimation;
  root["seed"] = s.seed;

  YAML::Node init;
  init["vehicle_position"] = yaml::sequence(s.initial.config.vehicle.position);
  init["vehicle_euler"] = yaml::sequence(s.initial.config.vehicle.euler);
  init["joints"] = yaml::sequence(s.initial.config.joints);
  init["velocity"] = yaml::sequence(s.initial.velocity);
  root["initial_state"] = init;

  YAML::Node env, contact, dist, noise, fd;
  if (s.contact_point_auto) {
    contact["point"] = "auto";
  } else {
    contact["point"] = yaml::sequence(s.contact.point);
  }
  contact["normal"] = yaml::sequence(s.contact.normal);
  contact["stiffness"] = yaml::sequence(Vec3(s.contact.stiffness.diagonal()));
  env["contact"] = contact;
  dist["amplitude"] = yaml::real(s.disturbance.amplitude);
  dist["frequency"] = yaml::real(s.disturbance.frequency);
  dist["axes"] = s.disturbance.axes;
  dist["axes"].SetStyle(YAML::EmitterStyle::Flow);
  env["disturbance"] = dist;
  noise["bound"] = yaml::sequence(s.noise.bound);
  env["noise"] = noise;
  fd["x"] = detail::profile_to_yaml(s.desired_force.axes[0]);
  fd["y"] = detail::profile_to_yaml(s.desired_force.axes[1]);
  fd["z"] = detail::profile_to_yaml(s.desired_force.axes[2]);
  env["desired_force"] = fd;
  env["desired_orientation"] = yaml::sequence(s.desired_orientation);
  root["environment"] = env;

  YAML::Node ctl;
  ctl["k_x"] = yaml::sequence(s.controller.k_x);
  ctl["k_zeta"] = yaml::sequence(s.controller.k_zeta);
  ctl["task_envelopes"] = detail::envelopes_to_yaml(s.controller.perf_x);
  ctl["velocity_envelopes"] = detail::envelopes_to_yaml(s.controller.perf_zeta);
  if (s.controller.secondary_velocity.size() > 0) {
    ctl["secondary_velocity"] = yaml::sequence(s.controller.secondary_velocity);
  }
  root["controller"] = ctl;

  YAML::Node lim;
  lim["enabled"] = s.actuator_limit.enabled;
  lim["bound"] = yaml::real(s.actuator_limit.bound);
  root["actuator_limit"] = lim;
  return root;
}

inline std::string scenario_to_string(const Scenario& s, bool inline_model = true) {
  YAML::Emitter out;
  out << YAML::Comment("UVMS prescribed-performance contact scenario (units: SI, angles in rad)");
  out << YAML::Newline;
  out << scenario_to_yaml(s, inline_model);
  return std::string(out.c_str()) + "\n";
}

inline std::string model_to_string(const DynamicModel& m) {
  YAML::Emitter out;
  out << model_to_yaml(m);
  return std::string(out.c_str()) + "\n";
}

}  // namespace uvms

#endif  // UVMS_PPC_SCENARIO_HPP_
