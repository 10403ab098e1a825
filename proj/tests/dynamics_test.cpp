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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "uvms_ppc/dynamics.hpp"
#include "uvms_ppc/model_io.hpp"

namespace uvms {
namespace {

using testing::random_configuration;
using testing::random_vector;

// Vehicle only: massless, volumeless links, no added mass.
DynamicModel bare_vehicle() {
  DynamicModel m = reference_uvms_model();
  for (RigidBody& b : m.links) b = RigidBody{};
  m.added_mass.setZero();
  m.vehicle.center_of_buoyancy.setZero();
  return m;
}

DynamicModel frictionless(DynamicModel m) {
  m.linear_drag.setZero();
  m.quadratic_drag.setZero();
  return m;
}

// Mdot along zeta by central differences of the configuration.
MatX mass_matrix_rate(const Configuration& c, const VecX& zeta, const DynamicModel& m, double h = 1e-5) {
  return (mass_matrix(testing::displace(c, zeta, h), m) - mass_matrix(testing::displace(c, zeta, -h), m)) / (2.0 * h);
}

TEST(ReferenceModel, Validates) { EXPECT_NO_THROW(validate_model(reference_uvms_model())); }

TEST(ValidateModel, RejectsNegativeDragAndMissingLinks) {
  DynamicModel m = reference_uvms_model();
  m.linear_drag[2] = -1.0;
  EXPECT_THROW(validate_model(m), ModelError);
  m = reference_uvms_model();
  m.links.pop_back();
  EXPECT_THROW(validate_model(m), ModelError);
  m = reference_uvms_model();
  m.added_mass(0, 1) = 1.0;
  EXPECT_THROW(validate_model(m), ModelError);
}

TEST(MassMatrix, SymmetricPositiveDefiniteAtRandomConfigurations) {
  const DynamicModel model = reference_uvms_model();
  std::mt19937_64 rng(101);
  for (int i = 0; i < 100; ++i) {
    const MatX m = mass_matrix(random_configuration(rng, model.kinematics), model);
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<MatX>(m).eigenvalues()[0], 0.0);
  }
}

TEST(MassMatrix, SingleBodyTranslationBlockIsMassTimesIdentity) {
  const DynamicModel model = bare_vehicle();
  std::mt19937_64 rng(103);
  const MatX m = mass_matrix(random_configuration(rng, model.kinematics), model);
  EXPECT_LT((m.topLeftCorner(3, 3) - model.vehicle.mass * MatX::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MassMatrix, IndependentOfVehiclePose) {
  const DynamicModel model = reference_uvms_model();
  std::mt19937_64 rng(107);
  Configuration a = random_configuration(rng, model.kinematics);
  Configuration b = a;
  b.vehicle = random_configuration(rng, model.kinematics).vehicle;
  EXPECT_EQ(mass_matrix(a, model), mass_matrix(b, model));
}

TEST(CoriolisMatrix, ZeroVelocityGivesZeroForce) {
  const DynamicModel model = reference_uvms_model();
  std::mt19937_64 rng(109);
  const Configuration c = random_configuration(rng, model.kinematics);
  const VecX z = VecX::Zero(10);
  EXPECT_TRUE((coriolis_matrix(c, z, model) * z).isZero(0.0));
}

// Property: zeta^T (Mdot - 2C) zeta = 0 on 1000 samples, Mdot from an independent difference.
TEST(CoriolisMatrix, SkewSymmetryOfMdotMinusTwoC) {
  const DynamicModel model = reference_uvms_model();
  std::mt19937_64 rng(113);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Configuration c = random_configuration(rng, model.kinematics);
    const VecX z = random_vector(rng, 10);
    const MatX n = mass_matrix_rate(c, z, model) - 2.0 * coriolis_matrix(c, z, model);
    worst = std::max(worst, std::abs(z.dot(n * z)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(CoriolisMatrix, BareVehicleMatchesRigidBodyCrossTerms) {
  DynamicModel model = bare_vehicle();
  model.added_mass = (Vec6() << 6.0, 8.0, 10.0, 0.4, 0.6, 0.6).finished().asDiagonal();
  std::mt19937_64 rng(127);
  for (int i = 0; i < 20; ++i) {
    const Configuration c = random_configuration(rng, model.kinematics);
    const VecX z = random_vector(rng, 10);
    const Mat6 mv = mass_matrix(c, model).topLeftCorner<6, 6>();
    const Vec3 v = z.head<3>(), w = z.segment<3>(3);
    const Vec3 p1 = mv.topLeftCorner<3, 3>() * v + mv.topRightCorner<3, 3>() * w;
    const Vec3 p2 = mv.bottomLeftCorner<3, 3>() * v + mv.bottomRightCorner<3, 3>() * w;
    Mat6 fossen = Mat6::Zero();
    fossen.topRightCorner<3, 3>() = -skew(p1);
    fossen.bottomLeftCorner<3, 3>() = -skew(p1);
    fossen.bottomRightCorner<3, 3>() = -skew(p2);
    const MatX cm = coriolis_matrix(c, z, model);
    EXPECT_LT((cm.topLeftCorner<6, 6>() - fossen).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DampingForce, Examples) {
  DynamicModel m = reference_uvms_model();
  EXPECT_TRUE(damping_force(VecX::Zero(10), m).isZero(0.0));
  m.linear_drag.setOnes();
  m.quadratic_drag.setZero();
  EXPECT_EQ(damping_force(VecX::Unit(10, 0), m), VecX::Unit(10, 0));
  m.linear_drag.setZero();
  m.quadratic_drag.setConstant(2.0);
  EXPECT_DOUBLE_EQ(damping_force(0.5 * VecX::Unit(10, 0), m)[0], 0.5);
}

TEST(DampingForce, DissipatesForRandomVelocities) {
  const DynamicModel m = reference_uvms_model();
  std::mt19937_64 rng(131);
  for (int i = 0; i < 1000; ++i) {
    const VecX z = random_vector(rng, 10, 3.0);
    EXPECT_GE(z.dot(damping_force(z, m)), 0.0);
  }
}

TEST(RestoringForce, NeutralCoincidentBodiesGiveZero) {
  DynamicModel m = reference_uvms_model();
  m.vehicle.center_of_buoyancy = m.vehicle.center_of_gravity;
  m.vehicle.displaced_volume = m.vehicle.mass / m.fluid_density;
  for (RigidBody& b : m.links) {
    b.center_of_buoyancy = b.center_of_gravity;
    b.displaced_volume = b.mass / m.fluid_density;
  }
  std::mt19937_64 rng(137);
  for (int i = 0; i < 20; ++i) {
    EXPECT_LT(restoring_force(random_configuration(rng, m.kinematics), m).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RestoringForce, MetacentricRollMoment) {
  DynamicModel m = bare_vehicle();
  m.vehicle.displaced_volume = m.vehicle.mass / m.fluid_density;
  m.vehicle.center_of_buoyancy = Vec3(0.0, 0.0, -0.05);  // above the CoG in NED
  Configuration c;
  c.joints = VecX::Zero(4);
  c.vehicle.euler = Vec3(0.1, 0.0, 0.0);
  const VecX g = restoring_force(c, m);
  const double w = m.vehicle.mass * m.gravity;
  EXPECT_NEAR(g[3], -w * 0.05 * std::sin(0.1), 1e-12);
  EXPECT_LT(g.head<3>().norm(), 1e-12);
  EXPECT_NEAR(g[4], 0.0, 1e-12);
  EXPECT_NEAR(g[5], 0.0, 1e-12);
}

TEST(RestoringForce, HorizontalLinkInAirLoadsItsJoint) {
  DynamicModel m;
  m.kinematics.joints = {{"pitch", Vec3::UnitY(), Vec3::Zero(), -3.0, 3.0}};
  m.vehicle.mass = 1.0;
  m.vehicle.inertia = Mat3::Identity();
  RigidBody link;
  link.mass = 1.0;
  link.center_of_gravity = Vec3(0.4, 0.0, 0.0);
  m.links = {link};
  m.armature = VecX::Ones(1);
  m.linear_drag = VecX::Zero(7);
  m.quadratic_drag = VecX::Zero(7);
  Configuration c;
  c.joints = VecX::Zero(1);
  EXPECT_NEAR(restoring_force(c, m)[6], -9.81 * 0.4, 1e-12);
}

TEST(RestoringForce, IsNegativeGradientOfPotential) {
  const DynamicModel m = reference_uvms_model();
  std::mt19937_64 rng(139);
  for (int i = 0; i < 20; ++i) {
    const Configuration c = random_configuration(rng, m.kinematics);
    const VecX g = restoring_force(c, m);
    for (Eigen::Index k = 0; k < 10; ++k) {
      const double h = 1e-6;
      const double dv = (potential_energy(testing::displace(c, VecX::Unit(10, k), h), m) -
                         potential_energy(testing::displace(c, VecX::Unit(10, k), -h), m)) / (2.0 * h);
      EXPECT_NEAR(g[k], -dv, 1e-6 * std::max(1.0, std::abs(dv)));
    }
  }
}

TEST(ForwardDynamics, BalancingTorqueGivesZeroAcceleration) {
  const DynamicModel m = reference_uvms_model();
  std::mt19937_64 rng(149);
  for (int i = 0; i < 20; ++i) {
    const Configuration c = random_configuration(rng, m.kinematics);
    const VecX z = random_vector(rng, 10);
    const Wrench lambda{random_vector(rng, 3), random_vector(rng, 3)};
    const VecX delta = random_vector(rng, 10, 0.2);
    const VecX tau = coriolis_matrix(c, z, m) * z + damping_force(z, m) - restoring_force(c, m) +
                     geometric_jacobian(c, m.kinematics).transpose() * lambda.stacked() + delta;
    EXPECT_LT(forward_dynamics(c, z, tau, lambda, delta, m).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ForwardDynamics, FreeBodyUnitSurgeAcceleration) {
  DynamicModel m = frictionless(bare_vehicle());
  m.gravity = 0.0;
  Configuration c;
  c.joints = VecX::Zero(4);
  const VecX tau = m.vehicle.mass * VecX::Unit(10, 0);
  const VecX a = forward_dynamics(c, VecX::Zero(10), tau, Wrench{}, VecX::Zero(10), m);
  EXPECT_NEAR(a[0], 1.0, 1e-14);
  EXPECT_LT(a.tail(9).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ForwardDynamics, RejectsWrongDimensions) {
  const DynamicModel m = reference_uvms_model();
  Configuration c;
  c.joints = VecX::Zero(4);
  EXPECT_THROW(forward_dynamics(c, VecX::Zero(9), VecX::Zero(10), Wrench{}, VecX::Zero(10), m), ModelError);
}

TEST(Rk4, ExponentialDecayOneStep) {
  const double y = rk4_step(1.0, 0.0, 0.1, [](double, double v) { return -v; });
  EXPECT_NEAR(y, 0.90483742, 1e-7);
  EXPECT_NEAR(y, std::exp(-0.1), 1e-7);
}

double integrate_decay(double h) {
  double y = 1.0, t = 0.0;
  const int steps = static_cast<int>(std::lround(1.0 / h));
  for (int k = 0; k < steps; ++k, t += h) y = rk4_step(y, t, h, [](double s, double v) { return -v + std::cos(s); });
  return y;
}

TEST(Rk4, MeasuredOrderIsFour) {
  // y' = -y + cos t, y(0) = 1: y = 0.5 (cos t + sin t) + 0.5 e^-t.
  const double exact = 0.5 * (std::cos(1.0) + std::sin(1.0)) + 0.5 * std::exp(-1.0);
  const double e1 = std::abs(integrate_decay(0.1) - exact);
  const double e2 = std::abs(integrate_decay(0.05) - exact);
  const double e3 = std::abs(integrate_decay(0.025) - exact);
  EXPECT_GE(std::log2(e1 / e2), 3.9);
  EXPECT_GE(std::log2(e2 / e3), 3.9);
}

TEST(StepPlant, BalancedRestStateIsUnchanged) {
  const DynamicModel m = reference_uvms_model();
  SystemState s;
  s.config.vehicle.euler = Vec3(0.2, 0.2, -0.2);
  s.config.joints = (VecX(4) << 0.0, 0.3, -0.6, 0.3).finished();
  s.velocity = VecX::Zero(10);
  PlantInputs in;
  in.tau = -restoring_force(s.config, m);
  const SystemState next = step_plant(s, 0.0, 1e-3, in, m);
  EXPECT_LT((pack_state(next) - pack_state(s)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StepPlant, RejectsNonFiniteState) {
  const DynamicModel m = reference_uvms_model();
  SystemState s;
  s.config.joints = VecX::Zero(4);
  s.velocity = VecX::Zero(10);
  s.velocity[2] = std::numeric_limits<double>::quiet_NaN();
  PlantInputs in;
  in.tau = VecX::Zero(10);
  EXPECT_THROW(step_plant(s, 0.0, 1e-3, in, m), NonFiniteStateError);
  s.velocity[2] = 0.0;
  EXPECT_THROW(step_plant(s, 0.0, 0.0, in, m), ValidationError);
}

TEST(StepPlant, WrapsAttitude) {
  DynamicModel m = frictionless(reference_uvms_model());
  m.gravity = 0.0;
  SystemState s;
  s.config.vehicle.euler = Vec3(0.0, 0.0, 3.14);
  s.config.joints = VecX::Zero(4);
  s.velocity = VecX::Zero(10);
  s.velocity[5] = 1.0;
  PlantInputs in;
  in.tau = VecX::Zero(10);
  const SystemState next = step_plant(s, 0.0, 0.01, in, m);
  EXPECT_LT(next.config.vehicle.euler[2], 0.0);
  EXPECT_GT(next.config.vehicle.euler[2], -3.14159);
}

// Property: the passive, frictionless, gravity-free system conserves kinetic energy.
TEST(Energy, ConservedWithoutDragOrGravity) {
  DynamicModel m = frictionless(reference_uvms_model());
  m.gravity = 0.0;
  SystemState s;
  s.config.vehicle.euler = Vec3(0.1, -0.2, 0.3);
  s.config.joints = (VecX(4) << 0.2, 0.3, -0.6, 0.3).finished();
  s.velocity = (VecX(10) << 0.1, -0.05, 0.08, 0.05, -0.04, 0.06, 0.2, -0.15, 0.1, 0.2).finished();
  PlantInputs in;
  in.tau = VecX::Zero(10);
  const double e0 = kinetic_energy(s.config, s.velocity, m);
  double drift = 0.0;
  for (int k = 0; k < 10000; ++k) {
    s = step_plant(s, k * 1e-3, 1e-3, in, m);
    drift = std::max(drift, std::abs(kinetic_energy(s.config, s.velocity, m) - e0));
  }
  EXPECT_LT(drift, 1e-6) << "initial energy " << e0;
}

// Property: with drag and hydrostatics but no input, total energy never rises.
TEST(Energy, PassiveSystemDoesNotGainEnergy) {
  const DynamicModel m = reference_uvms_model();
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 3; ++trial) {
    SystemState s;
    s.config = random_configuration(rng, m.kinematics);
    s.config.vehicle.euler[1] = testing::uniform(rng, -0.6, 0.6);
    s.velocity = random_vector(rng, 10, 0.5);
    PlantInputs in;
    in.tau = VecX::Zero(10);
    double e = kinetic_energy(s.config, s.velocity, m) + potential_energy(s.config, m);
    double worst_rise = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2000; ++k) {
      s = step_plant(s, k * 1e-3, 1e-3, in, m);
      const double next = kinetic_energy(s.config, s.velocity, m) + potential_energy(s.config, m);
      worst_rise = std::max(worst_rise, next - e);
      e = next;
    }
    EXPECT_LT(worst_rise, 1e-6);
  }
}

}  // namespace
}  // namespace uvms
