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
 * @file verification.hpp
 * @brief Envelope checks on logs, robustness sweeps and the 1-DoF cross-check.
 */

#ifndef UVMS_PPC_VERIFICATION_HPP_
#define UVMS_PPC_VERIFICATION_HPP_

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "uvms_ppc/oracle_1dof.hpp"
#include "uvms_ppc/simulation.hpp"

namespace uvms {

struct OracleReport {
  std::string property;
  std::size_t samples = 0;
  double max_residual = 0.0;  ///< property specific; for envelopes the largest |e|/rho
  double min_margin = std::numeric_limits<double>::infinity();  ///< smallest rho - |e|
  bool passed = true;
  std::string worst_case;  ///< where max_residual / the first failure occurred
  std::string notes;
};

namespace detail {

inline std::string locate(double t, ErrorLevel level, std::size_t channel, double e, double rho) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << t << " " << to_string(level) << " channel " << channel << " |e|=" << std::abs(e) << " rho=" << rho;
  return os.str();
}

}  // namespace detail

/// |e_x,j| < rho_x,j and |e_zeta,j| < rho_zeta,j on every record.
inline OracleReport envelope_battery(const SimLog& log) {
  OracleReport r;
  r.property = "envelope containment";
  r.samples = log.records.size();
  if (log.records.empty()) {
    r.min_margin = 0.0;
    r.notes = "no samples";
    return r;
  }
  double worst_ratio = -1.0;
  std::string first_failure;
  auto check = [&](double t, ErrorLevel level, std::size_t channel, double e, double rho) {
    const double ratio = std::abs(e) / rho;
    const double margin = rho - std::abs(e);
    r.min_margin = std::min(r.min_margin, margin);
    if (!(ratio < 1.0) || !std::isfinite(ratio)) {
      if (r.passed) first_failure = detail::locate(t, level, channel, e, rho);
      r.passed = false;
    }
    if (ratio > worst_ratio || std::isnan(ratio)) {
      worst_ratio = ratio;
      r.worst_case = detail::locate(t, level, channel, e, rho);
    }
  };
  for (const LogRecord& rec : log.records) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      check(rec.t, ErrorLevel::kTask, static_cast<std::size_t>(j) + 1, rec.e_x[j], rec.rho_x[j]);
    }
    for (Eigen::Index j = 0; j < rec.e_zeta.size(); ++j) {
      check(rec.t, ErrorLevel::kVelocity, static_cast<std::size_t>(j) + 1, rec.e_zeta[j], rec.rho_zeta[j]);
    }
  }
  r.max_residual = worst_ratio;
  if (!r.passed) {
    r.notes = "first violation: " + first_failure;
    r.worst_case = first_failure;
  }
  return r;
}

/// Over the trailing `fraction` of the run every |e_x,j| < rho_inf,j.
inline OracleReport steady_state_battery(const SimLog& log, const ControllerConfig& cfg, double fraction = 0.2) {
  OracleReport r;
  r.property = "steady-state tube";
  if (log.records.empty()) {
    r.min_margin = 0.0;
    r.notes = "no samples";
    return r;
  }
  const double t_end = log.records.back().t;
  const double t_from = t_end * (1.0 - fraction);
  for (const LogRecord& rec : log.records) {
    if (rec.t < t_from) continue;
    ++r.samples;
    for (int j = 0; j < 6; ++j) {
      const double bound = cfg.perf_x[static_cast<std::size_t>(j)].rho_inf;
      const double margin = bound - std::abs(rec.e_x[j]);
      if (margin < r.min_margin) {
        r.min_margin = margin;
        r.worst_case = detail::locate(rec.t, ErrorLevel::kTask, static_cast<std::size_t>(j) + 1, rec.e_x[j], bound);
      }
      r.max_residual = std::max(r.max_residual, std::abs(rec.e_x[j]) / bound);
    }
  }
  r.passed = r.min_margin > 0.0;
  return r;
}

/// Scales inertia (vehicle, added mass, links, armature) and drag; displaced volumes
/// follow the masses so trim is unchanged.
inline DynamicModel perturb_plant(DynamicModel m, double factor) {
  m.vehicle.mass *= factor;
  m.vehicle.inertia *= factor;
  m.vehicle.displaced_volume *= factor;
  m.added_mass *= factor;
  for (RigidBody& b : m.links) {
    b.mass *= factor;
    b.inertia *= factor;
    b.displaced_volume *= factor;
  }
  m.armature *= factor;
  m.linear_drag *= factor;
  m.quadratic_drag *= factor;
  return m;
}

struct Variant {
  std::string name;
  double disturbance_scale = 1.0;
  double noise_scale = 1.0;
  double plant_scale = 1.0;
};

struct VariantResult {
  Variant variant;
  bool completed = false;
  OracleReport envelopes;
  std::string message;  ///< abort reason when !completed
};

inline Scenario apply_variant(Scenario s, const Variant& v) {
  s.disturbance.amplitude *= v.disturbance_scale;
  s.noise.bound *= v.noise_scale;
  if (v.plant_scale != 1.0) {
    s.model = perturb_plant(s.model, v.plant_scale);
    s.model_file.clear();
  }
  return s;
}

inline VariantResult run_variant(const Scenario& base, const Variant& v) {
  VariantResult out;
  out.variant = v;
  SimLog log;
  try {
    run_scenario_into(apply_variant(base, v), log);
    out.completed = true;
  } catch (const std::exception& e) {
    out.message = e.what();
  }
  out.envelopes = envelope_battery(log);
  out.envelopes.property = "envelope containment [" + v.name + "]";
  if (!out.completed) {
    out.envelopes.passed = false;
    out.envelopes.notes = out.message;
  }
  return out;
}

/// Disturbance x {0,1,2} by noise x {0,1,2}, then plant inertia/drag x {0.7, 1.3} with
/// the base environment and with a quiet one.
inline std::vector<Variant> robustness_variants() {
  std::vector<Variant> v;
  for (double d : {0.0, 1.0, 2.0}) {
    for (double n : {0.0, 1.0, 2.0}) {
      std::ostringstream name;
      name << "disturbance x" << d << ", noise x" << n;
      v.push_back({name.str(), d, n, 1.0});
    }
  }
  for (double p : {0.7, 1.3}) {
    std::ostringstream a, b;
    a << "plant x" << p;
    b << "plant x" << p << ", quiet";
    v.push_back({a.str(), 1.0, 1.0, p});
    v.push_back({b.str(), 0.0, 0.0, p});
  }
  return v;
}

struct RobustnessReport {
  OracleReport summary;
  std::vector<VariantResult> variants;
};

/// Each variant runs on its own thread of an async pool; results keep variant order.
inline RobustnessReport robustness_battery(const Scenario& base, const std::vector<Variant>& variants,
                                           unsigned max_parallel = std::max(1u, std::thread::hardware_concurrency())) {
  RobustnessReport rep;
  rep.variants.resize(variants.size());
  for (std::size_t start = 0; start < variants.size(); start += max_parallel) {
    std::vector<std::future<VariantResult>> batch;
    const std::size_t stop = std::min(variants.size(), start + max_parallel);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, [&base, &variants, i] { return run_variant(base, variants[i]); }));
    }
    for (std::size_t i = start; i < stop; ++i) rep.variants[i] = batch[i - start].get();
  }
  OracleReport& s = rep.summary;
  s.property = "robustness sweep";
  s.samples = variants.size();
  for (const VariantResult& r : rep.variants) {
    s.min_margin = std::min(s.min_margin, r.envelopes.min_margin);
    s.max_residual = std::max(s.max_residual, r.envelopes.max_residual);
    if (!r.envelopes.passed && s.passed) {
      s.passed = false;
      s.worst_case = r.variant.name + ": " + (r.completed ? r.envelopes.worst_case : r.message);
    }
  }
  return rep;
}

inline RobustnessReport robustness_battery(const Scenario& base) {
  return robustness_battery(base, robustness_variants());
}

/// Disturbance scaled far beyond the base case. Expected to break containment; the
/// result documents that the bounds in the stability argument are finite.
inline VariantResult stress_probe(const Scenario& base, double disturbance_scale = 100.0) {
  std::ostringstream name;
  name << "stress: disturbance x" << disturbance_scale;
  return run_variant(base, {name.str(), disturbance_scale, 1.0, 1.0});
}

/// Full stack configured so that surge is the only excited channel: unit-mass vehicle
/// with identity inertia and no hydrostatics, one massless roll joint whose axis passes
/// through the end effector, zero attitude, wall normal -x. Penetration and surge
/// velocity then follow the scalar oracle.
inline Scenario one_dof_scenario(const oracle::Config& c, double lever = 0.5, double armature = 1.0) {
  Scenario s;
  DynamicModel& m = s.model;
  JointSpec roll;
  roll.name = "tool_roll";
  roll.axis = Vec3::UnitX();
  roll.parent_offset = Vec3(lever, 0.0, 0.0);
  roll.lower = -std::numbers::pi;
  roll.upper = std::numbers::pi;
  m.kinematics.joints = {roll};
  m.kinematics.tool_offset = Vec3::Zero();
  m.vehicle.mass = c.mass;
  m.vehicle.inertia = Mat3::Identity();
  m.added_mass.setZero();
  m.links = {RigidBody{}};
  m.armature = VecX::Constant(1, armature);
  m.linear_drag = VecX::Zero(7);
  m.quadratic_drag = VecX::Zero(7);
  m.linear_drag[0] = c.linear_drag;
  m.quadratic_drag[0] = c.quadratic_drag;
  m.gravity = 0.0;

  s.initial.config.vehicle = VehiclePose{};
  s.initial.config.joints = VecX::Zero(1);
  s.initial.velocity = VecX::Zero(7);
  s.initial.velocity[0] = c.v0;

  s.contact.normal = Vec3(-1.0, 0.0, 0.0);
  s.contact.stiffness = c.stiffness * Mat3::Identity();
  s.contact_point_auto = false;
  s.contact.point = Vec3(lever - c.x0, 0.0, 0.0);

  s.disturbance.amplitude = c.disturbance_amplitude;
  s.disturbance.frequency = c.disturbance_omega;
  s.disturbance.axes = {0};
  s.noise.bound.setZero();
  s.desired_force.axes[0] = sinusoid_profile(c.force_offset, c.force_amplitude, c.force_omega);
  s.desired_orientation.setZero();

  s.controller.k_x = Vec6::Constant(c.k_x);
  s.controller.k_zeta = VecX::Constant(7, c.k_v);
  const PerformanceFunction px{c.rho_x.rho0, c.rho_x.rho_inf, c.rho_x.decay};
  const PerformanceFunction pv{c.rho_v.rho0, c.rho_v.rho_inf, c.rho_v.decay};
  s.controller.perf_x.fill(px);
  s.controller.perf_zeta.assign(7, pv);

  s.duration = c.duration;
  s.step = c.step;
  s.seed = c.seed;
  return s;
}

/// Max |penetration - x| and |zeta_1 - v| between the reduced stack and the oracle.
/// Noise is not compared (the two sides draw it differently), so it must be zero.
inline OracleReport compare_with_oracle(const oracle::Config& c, double tolerance = 1e-6) {
  OracleReport r;
  r.property = "1-DoF oracle equivalence";
  if (c.noise_bound != 0.0) {
    r.passed = false;
    r.notes = "oracle comparison needs noise_bound = 0";
    return r;
  }
  const Scenario s = one_dof_scenario(c);
  const oracle::Trace ref = oracle::run(c);
  SimLog log;
  std::string stack_error;
  try {
    run_scenario_into(s, log);
  } catch (const std::exception& e) {
    stack_error = e.what();
  }
  if (ref.violated != !stack_error.empty()) {
    r.passed = false;
    r.notes = "abort mismatch: oracle '" + ref.message + "' vs stack '" + stack_error + "'";
  }
  const std::size_t count = std::min(ref.samples.size(), log.records.size());
  if (ref.samples.size() != log.records.size()) {
    r.passed = false;
    r.notes += (r.notes.empty() ? "" : "; ") + std::string("sample counts differ");
  }
  r.samples = count;
  const double wall = s.contact.point.x();
  for (std::size_t k = 0; k < count; ++k) {
    const LogRecord& rec = log.records[k];
    const oracle::Sample& o = ref.samples[k];
    Configuration cfg;
    cfg.vehicle.position = rec.q.head<3>();
    cfg.vehicle.euler = rec.q.segment<3>(3);
    cfg.joints = rec.q.tail(1);
    const double penetration = end_effector_pose(cfg, s.model.kinematics).position.x() - wall;
    const double dev = std::max(std::abs(penetration - o.x), std::abs(rec.zeta[0] - o.v));
    if (dev > r.max_residual) {
      r.max_residual = dev;
      std::ostringstream os;
      os.precision(17);
      os << "t=" << o.t << " stack (x=" << penetration << ", v=" << rec.zeta[0] << ") oracle (x=" << o.x
         << ", v=" << o.v << ")";
      r.worst_case = os.str();
    }
  }
  r.min_margin = tolerance - r.max_residual;
  if (!(r.max_residual < tolerance)) r.passed = false;
  return r;
}

inline std::string format_report(const OracleReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "[" << (r.passed ? "PASS" : "FAIL") << "] " << r.property << "\n"
     << "  samples:      " << r.samples << "\n"
     << "  max residual: " << r.max_residual << "\n"
     << "  min margin:   " << r.min_margin << "\n";
  if (!r.worst_case.empty()) os << "  worst case:   " << r.worst_case << "\n";
  if (!r.notes.empty()) os << "  notes:        " << r.notes << "\n";
  return os.str();
}

inline std::string format_report(const RobustnessReport& r) {
  std::string out = format_report(r.summary);
  for (const VariantResult& v : r.variants) out += format_report(v.envelopes);
  return out;
}

inline void write_report(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace uvms

#endif  // UVMS_PPC_VERIFICATION_HPP_
