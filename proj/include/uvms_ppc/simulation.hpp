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
 * @file simulation.hpp
 * @brief Deterministic closed-loop execution and the in-memory log.
 *
 * Each step k (t_k = k h): sense noisy force and end-effector attitude, evaluate the
 * controller, optionally clamp, record, then advance the plant one RK4 step with the
 * torque held. Contact and disturbance are re-evaluated inside every RK4 stage.
 */

#ifndef UVMS_PPC_SIMULATION_HPP_
#define UVMS_PPC_SIMULATION_HPP_

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvms_ppc/controller.hpp"
#include "uvms_ppc/dynamics.hpp"
#include "uvms_ppc/environment.hpp"
#include "uvms_ppc/scenario.hpp"

namespace uvms {

/// One logged sample. q = [eta1; eta2; q_m] has n entries like zeta.
struct LogRecord {
  double t = 0.0;
  VecX q;
  VecX zeta;
  Vec3 force_true = Vec3::Zero();      ///< exerted on the environment
  Vec3 force_measured = Vec3::Zero();
  Vec3 force_desired = Vec3::Zero();
  Vec6 e_x = Vec6::Zero();
  Vec6 rho_x = Vec6::Zero();
  VecX e_zeta;
  VecX rho_zeta;
  VecX tau;
  bool contact = false;
  VecX disturbance;

  /// Flat row in column order (see column_names).
  std::vector<double> row() const {
    std::vector<double> r;
    r.reserve(static_cast<std::size_t>(23 + 6 * q.size()));
    auto put = [&r](const auto& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(v[i]);
    };
    r.push_back(t);
    put(q);
    put(zeta);
    put(force_true);
    put(force_measured);
    put(force_desired);
    put(e_x);
    put(rho_x);
    put(e_zeta);
    put(rho_zeta);
    put(tau);
    r.push_back(contact ? 1.0 : 0.0);
    put(disturbance);
    return r;
  }

  static LogRecord from_row(const std::vector<double>& r, std::size_t n) {
    const auto ni = static_cast<Eigen::Index>(n);
    if (r.size() != 23 + 6 * n) throw ValidationError("log row has wrong width");
    std::size_t at = 0;
    auto take = [&](Eigen::Index len) {
      VecX v(len);
      for (Eigen::Index i = 0; i < len; ++i) v[i] = r[at++];
      return v;
    };
    LogRecord rec;
    rec.t = r[at++];
    rec.q = take(ni);
    rec.zeta = take(ni);
    rec.force_true = take(3);
    rec.force_measured = take(3);
    rec.force_desired = take(3);
    rec.e_x = take(6);
    rec.rho_x = take(6);
    rec.e_zeta = take(ni);
    rec.rho_zeta = take(ni);
    rec.tau = take(ni);
    rec.contact = r[at++] != 0.0;
    rec.disturbance = take(ni);
    return rec;
  }
};

inline std::size_t record_width(std::size_t n) { return 23 + 6 * n; }

/// Header names in row order.
inline std::vector<std::string> column_names(std::size_t n) {
  std::vector<std::string> c;
  c.reserve(record_width(n));
  auto indexed = [&c](const std::string& base, std::size_t count) {
    for (std::size_t i = 1; i <= count; ++i) c.push_back(base + std::to_string(i));
  };
  c.push_back("t");
  indexed("q", n);
  indexed("zeta", n);
  for (const char* a : {"x", "y", "z"}) c.push_back(std::string("f_true_") + a);
  for (const char* a : {"x", "y", "z"}) c.push_back(std::string("f_meas_") + a);
  for (const char* a : {"x", "y", "z"}) c.push_back(std::string("f_des_") + a);
  indexed("e_x", 6);
  indexed("rho_x", 6);
  indexed("e_zeta", n);
  indexed("rho_zeta", n);
  indexed("tau", n);
  c.push_back("contact");
  indexed("delta", n);
  return c;
}

struct SimLog {
  std::size_t n = 0;
  std::vector<LogRecord> records;
  std::size_t saturated_steps = 0;  ///< steps where the actuator clamp was active
};

/// Run aborted. Carries the step index and the last complete record.
class SimulationError : public std::runtime_error {
 public:
  enum class Cause { kEnvelope, kNonFinite, kValidation };

  SimulationError(Cause cause, std::size_t step, double time, std::optional<LogRecord> last, const std::string& what,
                  std::optional<EnvelopeViolation> violation = std::nullopt)
      : std::runtime_error(describe(step, time, what)),
        cause_(cause), step_(step), time_(time), last_(std::move(last)), violation_(std::move(violation)) {}

  Cause cause() const { return cause_; }
  std::size_t step() const { return step_; }
  double time() const { return time_; }
  const std::optional<LogRecord>& last_record() const { return last_; }
  const std::optional<EnvelopeViolation>& violation() const { return violation_; }

 private:
  static std::string describe(std::size_t step, double time, const std::string& what) {
    std::ostringstream os;
    os.precision(17);
    os << "simulation aborted at step " << step << " (t=" << time << " s): " << what;
    return os.str();
  }

  Cause cause_;
  std::size_t step_;
  double time_;
  std::optional<LogRecord> last_;
  std::optional<EnvelopeViolation> violation_;
};

namespace detail {

inline VecX stacked_configuration(const Configuration& c) {
  VecX q(static_cast<Eigen::Index>(c.dof()));
  q << c.vehicle.position, c.vehicle.euler, c.joints;
  return q;
}

}  // namespace detail

inline std::size_t step_count(const Scenario& s) {
  return static_cast<std::size_t>(std::llround(s.duration / s.step));
}

/// Closed-loop run into `log`; on abort `log` keeps every record logged so far.
/// Deterministic given the scenario (noise depends on seed and t only).
inline void run_scenario_into(const Scenario& s, SimLog& log) {
  log = SimLog{};
  try {
    validate_scenario(s);
  } catch (const std::exception& e) {
    throw SimulationError(SimulationError::Cause::kValidation, 0, 0.0, std::nullopt, e.what());
  }
  const std::size_t n = s.dof();
  const std::size_t steps = step_count(s);
  const auto dec = static_cast<std::size_t>(s.log_decimation);

  log.n = n;
  log.records.reserve(steps / dec + 1);

  PpcController controller(s.controller, s.model.kinematics);
  const CompliantPlane plane = s.contact;
  const DisturbanceSpec dist = s.disturbance;
  PlantInputs inputs;
  inputs.exerted_wrench = [&plane, &s](const Configuration& c) {
    return -contact_force(end_effector_pose(c, s.model.kinematics).position, plane);
  };
  inputs.disturbance = [&dist, n](double t) { return disturbance(t, dist, n); };

  SystemState state = s.initial;
  std::optional<LogRecord> last;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * s.step;
    LogRecord rec;
    rec.t = t;
    rec.q = detail::stacked_configuration(state.config);
    rec.zeta = state.velocity;

    const EndEffectorPose ee = end_effector_pose(state.config, s.model.kinematics);
    const Wrench exerted = inputs.exerted_wrench(state.config);
    rec.force_true = exerted.force;
    rec.force_measured = measure_force(exerted.force, s.noise, t);
    rec.force_desired = s.desired_force(t);
    rec.contact = penetration_depth(ee.position, plane) > 0.0;
    rec.disturbance = inputs.disturbance(t);

    const SensorReading sensor{rec.force_measured, ee.euler};
    const TaskReference ref{rec.force_desired, s.desired_orientation};
    try {
      controller.compute(sensor, ref, state.config, state.velocity, t);
    } catch (const EnvelopeViolation& v) {
      throw SimulationError(SimulationError::Cause::kEnvelope, k, t, last, v.what(), v);
    } catch (const SingularityError& e) {
      throw SimulationError(SimulationError::Cause::kNonFinite, k, t, last, e.what());
    }
    const ControlDiagnostics& d = controller.last();
    rec.e_x = d.e_x;
    rec.rho_x = d.rho_x;
    rec.e_zeta = d.e_zeta;
    rec.rho_zeta = d.rho_zeta;
    rec.tau = d.tau;
    if (s.actuator_limit.enabled) {
      const double b = s.actuator_limit.bound;
      if ((rec.tau.array().abs() > b).any()) ++log.saturated_steps;
      rec.tau = rec.tau.cwiseMax(-b).cwiseMin(b);
    }
    if (!rec.tau.allFinite()) {
      throw SimulationError(SimulationError::Cause::kNonFinite, k, t, last, "non-finite control torque");
    }

    if (k % dec == 0) log.records.push_back(rec);
    if (k == steps) break;

    inputs.tau = rec.tau;
    try {
      state = step_plant(state, t, s.step, inputs, s.model);
    } catch (const NonFiniteStateError& e) {
      throw SimulationError(SimulationError::Cause::kNonFinite, k, t, rec, e.what());
    } catch (const SingularityError& e) {
      throw SimulationError(SimulationError::Cause::kNonFinite, k, t, rec, e.what());
    }
    last = std::move(rec);
  }
}

inline SimLog run_scenario(const Scenario& s) {
  SimLog log;
  run_scenario_into(s, log);
  return log;
}

}  // namespace uvms

#endif  // UVMS_PPC_SIMULATION_HPP_
