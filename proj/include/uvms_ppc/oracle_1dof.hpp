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

// Stand-alone scalar reference: a mass pressing on a spring wall under the two-level
// prescribed-performance law. Standard library only, nothing shared with the main
// modules, so it can cross-check them.
//
//   x   penetration into the wall (m), f = K max(0, x)
//   m v' = tau - d v - d2 v|v| - f - delta(t)

#ifndef UVMS_PPC_ORACLE_1DOF_HPP_
#define UVMS_PPC_ORACLE_1DOF_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace uvms::oracle {

struct Envelope {
  double rho0 = 1.0;
  double rho_inf = 0.2;
  double decay = 1.0;
  double at(double t) const { return (rho0 - rho_inf) * std::exp(-decay * t) + rho_inf; }
};

struct Config {
  double mass = 1.0;
  double linear_drag = 0.0;
  double quadratic_drag = 0.0;
  double stiffness = 2.0;
  double x0 = 0.0;
  double v0 = 0.0;
  // f_d(t) = offset + amplitude sin(omega t)
  double force_offset = 0.4;
  double force_amplitude = 0.0;
  double force_omega = 0.0;
  double k_x = 0.2;
  double k_v = 5.0;
  Envelope rho_x{1.0, 0.2, 3.0};
  Envelope rho_v{1.0, 0.2, 2.2};
  double disturbance_amplitude = 0.0;
  double disturbance_omega = 0.0;
  double noise_bound = 0.0;
  std::uint64_t seed = 1;
  double duration = 10.0;
  double step = 1e-3;
};

struct Sample {
  double t, x, v, force, error_x, rho_x, error_v, rho_v, tau;
};

struct Trace {
  std::vector<Sample> samples;
  bool violated = false;
  std::string message;
};

inline double log_ratio(double xi) { return std::log((1.0 + xi) / (1.0 - xi)); }

inline Trace run(const Config& c) {
  Trace out;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto accel = [&c](double t, double x, double v, double tau) {
    const double f = x > 0.0 ? c.stiffness * x : 0.0;
    const double delta = c.disturbance_amplitude * std::sin(c.disturbance_omega * t);
    return (tau - c.linear_drag * v - c.quadratic_drag * std::fabs(v) * v - f - delta) / c.mass;
  };

  double x = c.x0;
  double v = c.v0;
  const long steps = std::lround(c.duration / c.step);
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * c.step;
    const double f = x > 0.0 ? c.stiffness * x : 0.0;
    const double noise = c.noise_bound > 0.0 ? c.noise_bound * unif(rng) : 0.0;
    const double fd = c.force_offset + c.force_amplitude * std::sin(c.force_omega * t);

    const double ex = f + noise - fd;
    const double rx = c.rho_x.at(t);
    const double xi_x = ex / rx;
    if (!(std::fabs(xi_x) < 1.0)) {
      out.violated = true;
      out.message = "force error left its envelope at t=" + std::to_string(t);
      return out;
    }
    const double v_ref = -c.k_x * log_ratio(xi_x);
    const double ev = v - v_ref;
    const double rv = c.rho_v.at(t);
    const double xi_v = ev / rv;
    if (!(std::fabs(xi_v) < 1.0)) {
      out.violated = true;
      out.message = "velocity error left its envelope at t=" + std::to_string(t);
      return out;
    }
    const double tau = -c.k_v * (2.0 / (1.0 - xi_v * xi_v)) * log_ratio(xi_v) / rv;
    out.samples.push_back({t, x, v, f, ex, rx, ev, rv, tau});
    if (k == steps) break;

    const double h = c.step;
    const double a1 = accel(t, x, v, tau);
    const double x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a1;
    const double a2 = accel(t + 0.5 * h, x2, v2, tau);
    const double x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2;
    const double a3 = accel(t + 0.5 * h, x3, v3, tau);
    const double x4 = x + h * v3, v4 = v + h * a3;
    const double a4 = accel(t + h, x4, v4, tau);
    x += h / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  }
  return out;
}

}  // namespace uvms::oracle

#endif  // UVMS_PPC_ORACLE_1DOF_HPP_
