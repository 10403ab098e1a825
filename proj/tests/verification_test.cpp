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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "uvms_ppc/oracle_1dof.hpp"
#include "uvms_ppc/verification.hpp"

namespace uvms {
namespace {

bool oracle_contained(const oracle::Trace& tr) {
  if (tr.violated) return false;
  for (const oracle::Sample& s : tr.samples) {
    if (!(std::abs(s.error_x) < s.rho_x) || !(std::abs(s.error_v) < s.rho_v)) return false;
  }
  return true;
}

TEST(Oracle, ZeroReferenceStaysAtRest) {
  oracle::Config c;
  c.force_offset = 0.0;
  const oracle::Trace tr = oracle::run(c);
  ASSERT_FALSE(tr.violated);
  ASSERT_EQ(tr.samples.size(), 10001u);
  for (const oracle::Sample& s : tr.samples) {
    EXPECT_EQ(s.error_x, 0.0);
    EXPECT_EQ(s.tau, 0.0);
  }
}

TEST(Oracle, StepForceEntersSteadyTube) {
  const oracle::Config c;
  const oracle::Trace tr = oracle::run(c);
  ASSERT_TRUE(oracle_contained(tr)) << tr.message;
  EXPECT_EQ(tr.samples.front().error_x, -0.4);
  for (const oracle::Sample& s : tr.samples) {
    if (s.t >= 3.0) {
      EXPECT_LT(std::abs(s.error_x), 0.2) << "t=" << s.t;
    }
  }
  EXPECT_LT(std::abs(tr.samples.back().error_x), 0.05);
}

// Containment does not depend on the velocity gain.
TEST(Oracle, GainSweepKeepsContainment) {
  for (double k : {2.5, 5.0, 10.0}) {
    oracle::Config c;
    c.k_v = k;
    const oracle::Trace tr = oracle::run(c);
    EXPECT_TRUE(oracle_contained(tr)) << "k_v=" << k << " " << tr.message;
  }
}

TEST(Oracle, DisturbedDraggedPlantStaysContained) {
  oracle::Config c;
  c.linear_drag = 2.0;
  c.quadratic_drag = 1.0;
  c.disturbance_amplitude = 0.15;
  c.disturbance_omega = 2.0 * std::numbers::pi / 7.0;
  c.noise_bound = 0.01;
  EXPECT_TRUE(oracle_contained(oracle::run(c)));
}

TEST(Oracle, NarrowEnvelopeIsReported) {
  oracle::Config c;
  c.rho_v = {1.0, 1e-4, 40.0};
  const oracle::Trace tr = oracle::run(c);
  EXPECT_TRUE(tr.violated);
  EXPECT_NE(tr.message.find("velocity"), std::string::npos);
}

TEST(OracleEquivalence, StepForce) {
  const OracleReport r = compare_with_oracle(oracle::Config{});
  EXPECT_TRUE(r.passed) << format_report(r);
  EXPECT_EQ(r.samples, 10001u);
  EXPECT_LT(r.max_residual, 1e-6);
}

TEST(OracleEquivalence, DisturbedDraggedPlantWithSinusoidalReference) {
  oracle::Config c;
  c.mass = 2.0;
  c.linear_drag = 2.0;
  c.quadratic_drag = 1.0;
  c.force_offset = 0.3;
  c.force_amplitude = 0.1;
  c.force_omega = 1.0;
  c.disturbance_amplitude = 0.15;
  c.disturbance_omega = 2.0 * std::numbers::pi / 7.0;
  const OracleReport r = compare_with_oracle(c);
  EXPECT_TRUE(r.passed) << format_report(r);
}

TEST(OracleEquivalence, HalvedVelocityGain) {
  oracle::Config c;
  c.k_v = 2.5;
  const OracleReport r = compare_with_oracle(c);
  EXPECT_TRUE(r.passed) << format_report(r);
}

// The narrow velocity envelope drives the sampled loop unstable a few steps
// before the abort, so round-off grows tenfold per step there. Both sides must
// abort on the same step, and agree to tolerance up to the onset.
TEST(OracleEquivalence, MatchingAbortsAgree) {
  oracle::Config c;
  c.rho_v = {1.0, 1e-4, 40.0};
  c.duration = 1.0;
  const OracleReport r = compare_with_oracle(c);
  EXPECT_EQ(r.notes, "") << format_report(r);
  EXPECT_EQ(r.samples, 81u);
  c.duration = 0.075;
  const OracleReport before = compare_with_oracle(c);
  EXPECT_TRUE(before.passed) << format_report(before);
}

TEST(OracleEquivalence, RefusesNoisyConfiguration) {
  oracle::Config c;
  c.noise_bound = 0.01;
  const OracleReport r = compare_with_oracle(c);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.notes.find("noise"), std::string::npos);
}

TEST(EnvelopeBattery, EmptyLogIsVacuousPass) {
  const OracleReport r = envelope_battery(SimLog{});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.samples, 0u);
  EXPECT_EQ(r.notes, "no samples");
}

TEST(EnvelopeBattery, InjectedSpikeIsLocated) {
  SimLog log = run_scenario(testing::step_force_scenario(0.3));
  ASSERT_TRUE(envelope_battery(log).passed);
  log.records[200].e_x[3] = -1.01 * log.records[200].rho_x[3];
  const OracleReport r = envelope_battery(log);
  EXPECT_FALSE(r.passed);
  EXPECT_LT(r.min_margin, 0.0);
  EXPECT_NE(r.worst_case.find("t=0.2"), std::string::npos) << r.worst_case;
  EXPECT_NE(r.worst_case.find("task channel 4"), std::string::npos) << r.worst_case;
}

TEST(EnvelopeBattery, NonFiniteErrorFails) {
  SimLog log = run_scenario(testing::step_force_scenario(0.01));
  log.records[3].e_zeta[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(envelope_battery(log).passed);
}

TEST(SteadyStateBattery, DetectsErrorOutsideAsymptoticTube) {
  SimLog log = run_scenario(testing::step_force_scenario(1.0));
  const ControllerConfig cfg = testing::step_force_scenario().controller;
  log.records.back().e_x[5] = 0.25;
  const OracleReport r = steady_state_battery(log, cfg);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.worst_case.find("channel 6"), std::string::npos);
  EXPECT_EQ(r.samples, 201u);
}

TEST(PerturbPlant, ScalesInertiaDragAndVolume) {
  const DynamicModel m = reference_uvms_model();
  const DynamicModel p = perturb_plant(m, 1.3);
  EXPECT_DOUBLE_EQ(p.vehicle.mass, 1.3 * m.vehicle.mass);
  EXPECT_DOUBLE_EQ(p.vehicle.displaced_volume, 1.3 * m.vehicle.displaced_volume);
  EXPECT_TRUE(p.added_mass.isApprox(1.3 * m.added_mass));
  EXPECT_DOUBLE_EQ(p.links[2].mass, 1.3 * m.links[2].mass);
  EXPECT_TRUE(p.linear_drag.isApprox(1.3 * m.linear_drag));
  EXPECT_TRUE(p.quadratic_drag.isApprox(1.3 * m.quadratic_drag));
  EXPECT_EQ(p.kinematics.tool_offset, m.kinematics.tool_offset);
  Configuration c;
  c.joints = VecX::Zero(4);
  c.vehicle.euler = Vec3(0.1, 0.2, 0.0);
  EXPECT_TRUE(restoring_force(c, p).isApprox(1.3 * restoring_force(c, m)));
}

TEST(RobustnessVariants, CoverDisturbanceNoiseAndPlantGrid) {
  const auto v = robustness_variants();
  ASSERT_EQ(v.size(), 13u);
  int grid = 0;
  for (const Variant& x : v) {
    if (x.plant_scale == 1.0) ++grid;
  }
  EXPECT_EQ(grid, 9);
  EXPECT_EQ(v[9].plant_scale, 0.7);
  EXPECT_EQ(v[12].name, "plant x1.3, quiet");
  EXPECT_EQ(v[12].disturbance_scale, 0.0);
}

const RobustnessReport& step_force_battery() {
  static const RobustnessReport rep = robustness_battery(testing::step_force_scenario(3.0));
  return rep;
}

TEST(RobustnessBattery, StepForceScenarioPassesEveryVariant) {
  const RobustnessReport& rep = step_force_battery();
  EXPECT_TRUE(rep.summary.passed) << format_report(rep);
  ASSERT_EQ(rep.variants.size(), 13u);
  for (const VariantResult& r : rep.variants) EXPECT_TRUE(r.completed) << r.variant.name << ": " << r.message;
}

// A quiet perturbed plant keeps a larger margin than the base run.
TEST(RobustnessBattery, QuietLighterPlantBeatsBaseMargin) {
  const RobustnessReport& rep = step_force_battery();
  ASSERT_EQ(rep.variants[4].variant.name, "disturbance x1, noise x1");
  ASSERT_EQ(rep.variants[10].variant.name, "plant x0.7, quiet");
  EXPECT_GT(rep.variants[10].envelopes.min_margin, rep.variants[4].envelopes.min_margin);
}

TEST(RobustnessBattery, QuietHeavierPlantBeatsBaseMargin) {
  const RobustnessReport& rep = step_force_battery();
  ASSERT_EQ(rep.variants[12].variant.name, "plant x1.3, quiet");
  EXPECT_GT(rep.variants[12].envelopes.min_margin, rep.variants[4].envelopes.min_margin)
      << "base: " << rep.variants[4].envelopes.worst_case << "\nquiet x1.3: " << rep.variants[12].envelopes.worst_case;
}

TEST(RobustnessBattery, ResultsDoNotDependOnParallelism) {
  const Scenario base = testing::step_force_scenario(0.2);
  const auto variants = robustness_variants();
  const RobustnessReport serial = robustness_battery(base, variants, 1);
  const RobustnessReport parallel = robustness_battery(base, variants, 5);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    EXPECT_EQ(serial.variants[i].envelopes.min_margin, parallel.variants[i].envelopes.min_margin);
  }
}

TEST(RobustnessBattery, AbortedVariantFailsTheSweep) {
  Scenario base = testing::step_force_scenario(1.0);
  base.controller.perf_zeta[6] = {1.0, 1e-4, 40.0};
  const RobustnessReport rep = robustness_battery(base, {{"mistuned", 1.0, 1.0, 1.0}});
  EXPECT_FALSE(rep.summary.passed);
  EXPECT_FALSE(rep.variants[0].completed);
  EXPECT_NE(rep.summary.worst_case.find("mistuned"), std::string::npos);
}

// Documented, not asserted: the stability bounds are finite, so a large enough
// disturbance is expected to break containment.
TEST(StressProbe, RunsAndReports) {
  const VariantResult r = stress_probe(testing::step_force_scenario(3.0));
  EXPECT_EQ(r.variant.disturbance_scale, 100.0);
  RecordProperty("stress_probe_passed", r.envelopes.passed ? "yes" : "no");
  RecordProperty("stress_probe_detail", r.completed ? r.envelopes.worst_case : r.message);
  std::cout << format_report(r.envelopes);
}

TEST(FormatReport, MarksPassAndFail) {
  OracleReport r;
  r.property = "demo";
  EXPECT_EQ(format_report(r).rfind("[PASS] demo", 0), 0u);
  r.passed = false;
  r.worst_case = "somewhere";
  const std::string text = format_report(r);
  EXPECT_EQ(text.rfind("[FAIL] demo", 0), 0u);
  EXPECT_NE(text.find("somewhere"), std::string::npos);
}

}  // namespace
}  // namespace uvms
