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

#ifndef UVMS_PPC_PERFORMANCE_HPP_
#define UVMS_PPC_PERFORMANCE_HPP_

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "uvms_ppc/types.hpp"

namespace uvms {

/// rho(t) = (rho0 - rho_inf) exp(-decay t) + rho_inf
struct PerformanceFunction {
  double rho0 = 1.0;
  double rho_inf = 0.2;
  double decay = 1.0;  ///< 1/s

  double value(double t) const { return (rho0 - rho_inf) * std::exp(-decay * t) + rho_inf; }
  double rate(double t) const { return -decay * (rho0 - rho_inf) * std::exp(-decay * t); }

  void validate() const {
    if (!(rho_inf > 0.0) || !(rho0 > rho_inf) || !(decay > 0.0)) {
      std::ostringstream os;
      os << "performance function needs rho0 > rho_inf > 0 and decay > 0 (got rho0=" << rho0
         << ", rho_inf=" << rho_inf << ", decay=" << decay << ")";
      throw ValidationError(os.str());
    }
  }
};

inline double perf_value(const PerformanceFunction& pf, double t) { return pf.value(t); }

/// Which level of the controller an error channel belongs to.
enum class ErrorLevel { kTask, kVelocity, kUnknown };

inline const char* to_string(ErrorLevel level) {
  switch (level) {
    case ErrorLevel::kTask: return "task";
    case ErrorLevel::kVelocity: return "velocity";
    default: return "unknown";
  }
}

/// An error reached its envelope: |e| >= rho.
class EnvelopeViolation : public std::runtime_error {
 public:
  EnvelopeViolation(ErrorLevel level, int channel, double time, double error, double bound)
      : std::runtime_error(describe(level, channel, time, error, bound)),
        level_(level), channel_(channel), time_(time), error_(error), bound_(bound) {}

  ErrorLevel level() const { return level_; }
  int channel() const { return channel_; }  ///< 1-based, 0 when unknown
  double time() const { return time_; }
  double error() const { return error_; }
  double bound() const { return bound_; }

 private:
  static std::string describe(ErrorLevel level, int channel, double time, double error, double bound) {
    std::ostringstream os;
    os.precision(17);
    os << "envelope violation: " << to_string(level) << " channel " << channel << " at t=" << time
       << " s, |e|=" << std::abs(error) << " >= rho=" << bound;
    return os.str();
  }

  ErrorLevel level_;
  int channel_;
  double time_;
  double error_;
  double bound_;
};

/// xi = e / rho; throws EnvelopeViolation when |xi| >= 1.
inline double normalize_error(double e, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("envelope must be positive");
  const double xi = e / rho;
  if (!(std::abs(xi) < 1.0)) throw EnvelopeViolation(ErrorLevel::kUnknown, 0, 0.0, e, rho);
  return xi;
}

/// epsilon = ln((1 + xi) / (1 - xi)), defined on (-1, 1).
inline double transform_error(double xi) {
  if (!(std::abs(xi) < 1.0)) throw std::domain_error("transformed error needs |xi| < 1");
  return std::log((1.0 + xi) / (1.0 - xi));
}

/// r = 2 / (1 - xi^2) = d epsilon / d xi.
inline double modulation_gain(double xi) {
  if (!(std::abs(xi) < 1.0)) throw std::domain_error("modulation gain needs |xi| < 1");
  return 2.0 / (1.0 - xi * xi);
}

}  // namespace uvms

#endif  // UVMS_PPC_PERFORMANCE_HPP_
