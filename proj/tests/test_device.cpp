// Copyright 2026 The geogate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "geogate/device.hpp"
#include "test_util.hpp"

using namespace geogate;

namespace {

// J1(x) = (1 / 2 pi) int_0^{2 pi} cos(t - x sin t) dt; the trapezoid rule is
// spectrally accurate on the periodic integrand.
double j1_quadrature(double x) {
  const int n = 512;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * k / n;
    s += std::cos(t - x * std::sin(t));
  }
  return s / n;
}

QOperator propagate_effective(const DeviceSchedule& s, const DeviceParams& p) {
  const HamiltonianFn h = effective_schedule_hamiltonian(s, p);
  QOperator u = identity(2);
  for (const auto& m : s.settings) u = propagate_tdse(h, {m.t_start, m.t_end(), 1e-5}) * u;
  return u;
}

SingleLogicalSettings uncalibrated() {
  SingleLogicalSettings s;
  s.calibration.enabled = false;
  return s;
}

}  // namespace

TEST(Bessel, MatchesQuadrature) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (double x : {0.0, 0.5, 1.2, 2.1, 7.9, 8.0, 8.1, 15.0}) EXPECT_NEAR(bessel_j1(x), j1_quadrature(x), 1e-12) << x;
  for (int k = 0; k < 50; ++k) {
    const double x = u(rng);
    EXPECT_NEAR(bessel_j1(x), j1_quadrature(x), 1e-12) << x;
  }
}

TEST(Bessel, OddAndZeroAtOrigin) {
  EXPECT_EQ(bessel_j1(0.0), 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int k = 0; k < 50; ++k) {
    const double x = u(rng);
    EXPECT_EQ(bessel_j1(-x), -bessel_j1(x));
  }
  EXPECT_THROW(bessel_j1(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST(Bessel, RisingInverse) {
  EXPECT_NEAR(bessel_j1(kBesselJ1ArgMax), kBesselJ1Max, 1e-15);
  for (double b : {0.1, 0.7, 1.2, 1.8}) EXPECT_NEAR(bessel_j1_rising_inverse(bessel_j1(b)), b, 1e-9);
  EXPECT_THROW(bessel_j1_rising_inverse(0.6), UnreachableAmplitude);
}

TEST(DeviceParams, Validation) {
  DeviceParams p;
  EXPECT_NO_THROW(p.validate());
  p.levels_transmon = 2;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.g_1a = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(SingleHamiltonian, ZeroCouplingIsZero) {
  DeviceParams p;
  p.g_1a = 0.0;
  const ModulationSettings m = make_modulation(p.delta1, 2.1, 0.3, 0.0, 0.0);
  for (double t : {0.0, 0.013, 0.1}) EXPECT_EQ(single_logical_hamiltonian(p, m, t).norm(), 0.0);
}

TEST(SingleHamiltonian, UnmodulatedElementsAtOrigin) {
  const DeviceParams p;
  const TensorBasis b = single_basis(p);
  const QOperator h = single_logical_hamiltonian(p, make_modulation(p.delta1, 0.0, 0.0, 0.0, 0.0), 0.0);
  EXPECT_EQ(h(b.index({1, 0}), b.index({0, 1})), cplx(p.g_1a));
  EXPECT_EQ(h(b.index({2, 0}), b.index({1, 1})), cplx(std::sqrt(2.0) * p.g_1a));
  EXPECT_EQ(h(b.index({1, 1}), b.index({0, 2})), cplx(std::sqrt(2.0) * p.g_1a));
}

TEST(SingleHamiltonian, PrintedPhasesAndStructure) {
  const DeviceParams p;
  const TensorBasis b = single_basis(p);
  const ModulationSettings m = make_modulation(p.delta1, 2.1, 0.4, 1.0, -2.0);
  for (double t : {0.0, 0.0071, 0.05, 0.31}) {
    const QOperator h = single_logical_hamiltonian(p, m, t);
    EXPECT_TRUE(is_hermitian(h, 0.0));
    EXPECT_EQ(h.row(b.index({0, 0})).norm(), 0.0);
    const cplx mod = std::exp(-kI * (2.1 * std::cos(m.nu * t + 0.4)));
    EXPECT_LT(std::abs(h(b.index({1, 0}), b.index({0, 1})) - p.g_1a * std::exp(kI * (p.delta1 * t)) * mod), 1e-12);
    EXPECT_LT(std::abs(h(b.index({2, 0}), b.index({1, 1})) -
                       std::sqrt(2.0) * p.g_1a * std::exp(kI * ((p.delta1 - p.alpha1) * t)) * mod),
              1e-12);
  }
}

TEST(TwoHamiltonian, ZeroCouplingIsZero) {
  DeviceParams p;
  p.g_a2 = 0.0;
  const ModulationSettings m = make_modulation(p.delta2 - p.alpha2, 1.2, 0.0, 0.0, 0.0);
  EXPECT_EQ(two_logical_hamiltonian(p, m, 0.02).norm(), 0.0);
}

TEST(TwoHamiltonian, PairElementAndSpectators) {
  const DeviceParams p;
  const TensorBasis b = two_basis(p);
  const QOperator h0 = two_logical_hamiltonian(p, make_modulation(p.delta2 - p.alpha2, 0.0, 0.0, 0.0, 0.0), 0.0);
  // Ra = 0, T2 = 2 against Ra = 1, T2 = 1.
  EXPECT_NEAR(std::abs(h0(b.index({0, 0, 2, 0}), b.index({0, 1, 1, 0}))), std::sqrt(2.0) * p.g_a2, 1e-12);

  const QOperator h = two_logical_hamiltonian(p, make_modulation(p.delta2 - p.alpha2, 1.2, 0.2, 0.0, 0.0), 0.017);
  EXPECT_TRUE(is_hermitian(h, 0.0));
  for (Eigen::Index r = 0; r < b.size(); ++r) {
    for (Eigen::Index c = 0; c < b.size(); ++c) {
      const auto dr = b.digits(r), dc = b.digits(c);
      if (dr[0] != dc[0] || dr[3] != dc[3]) {
        EXPECT_EQ(h(r, c), cplx(0.0));
        continue;
      }
      // The pair block must not depend on the spectator labels.
      auto r0 = dr, c0 = dc;
      r0[0] = c0[0] = 0;
      r0[3] = c0[3] = 0;
      EXPECT_EQ(h(r, c), h(b.index(r0), b.index(c0)));
    }
  }
}

TEST(EffectiveControl, BesselAmplitude) {
  const DeviceParams p;
  const ModulationSettings m = make_modulation(p.delta1, 2.1, 0.0, 0.0, 0.0);
  const EffectiveControl e = effective_logical_hamiltonian(p, m);
  EXPECT_NEAR(e.omega_L, 2.0 * j1_quadrature(2.1) * mhz(20.0), 1e-12 * e.omega_L);
  EXPECT_EQ(effective_logical_hamiltonian(p, make_modulation(p.delta1, 0.0, 0.0, 0.0, 0.0)).omega_L, 0.0);
  const EffectiveControl pair = effective_logical_hamiltonian(p, make_modulation(p.delta2 - p.alpha2, 1.2, 0, 0, 0),
                                                              Channel::kPair);
  EXPECT_NEAR(pair.omega_L, 2.0 * std::sqrt(2.0) * j1_quadrature(1.2) * p.g_a2, 1e-12 * pair.omega_L);
}

TEST(EffectiveControl, BookkeepingViolationRejected) {
  const DeviceParams p;
  ModulationSettings m = make_modulation(p.delta1, 2.1, 0.0, 1.0, 2.0);
  m.nu += 0.5;
  EXPECT_THROW(effective_logical_hamiltonian(p, m), InvalidArgument);
}

TEST(Schedule, BookkeepingAndBesselOnEverySegment) {
  const DeviceParams p;
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const SingleLogicalGate gate = build_single_logical_gate(g, uncalibrated(), {0.004, 1.5});
    for (const auto& m : gate.schedule.settings) {
      EXPECT_LE(std::abs(m.bookkeeping_residual()), 1e-12 * m.nu);
      EXPECT_NEAR(effective_logical_hamiltonian(p, m).omega_L / (2.0 * p.g_1a), bessel_j1(m.beta), 1e-12);
    }
  }
}

TEST(Schedule, ResonantAndLatitudeSegments) {
  const DeviceParams p;
  const PathSpec path = gate_preset(Gate::kH);
  const SingleLogicalGate gate = build_single_logical_gate(Gate::kH, uncalibrated(), {});
  bool saw_resonant = false, saw_latitude = false;
  for (const auto& m : gate.schedule.settings) {
    if (m.mu == 0.0) {
      saw_resonant = true;
      EXPECT_EQ(m.delta_L, 0.0);
      EXPECT_NEAR(m.nu, p.delta1 + m.mu, 1e-12 * m.nu);
    } else {
      saw_latitude = true;
      EXPECT_NEAR(m.delta_L, -gate.omega_L * std::tan(path.chi2), 1e-9 * gate.omega_L);
    }
  }
  EXPECT_TRUE(saw_resonant);
  EXPECT_TRUE(saw_latitude);
}

TEST(Schedule, EffectiveModelReproducesTarget) {
  const DeviceParams p;
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const SingleLogicalGate gate = build_single_logical_gate(g, uncalibrated(), {0.002, 0.0});
    EXPECT_LT(distance_up_to_global_phase(propagate_effective(gate.schedule, p), scheduled_target(gate.schedule)), 1e-6);
  }
}

TEST(Schedule, PhaseContinuousAcrossBoundaries) {
  const SingleLogicalGate gate = build_single_logical_gate(Gate::kS, uncalibrated(), {0.001, 0.0});
  const auto& s = gate.schedule.settings;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double t = s[k].t_start;
    EXPECT_NEAR(s[k - 1].accumulated_phase(t), s[k].accumulated_phase(t), 1e-9);
  }
}

TEST(Schedule, AmplitudeMatchAndUnreachable) {
  const DeviceParams p;
  ScheduleOptions opt;
  opt.beta_mode = BetaMode::kAmplitudeMatch;
  const double omega = mhz(10.0);
  const DeviceSchedule s = schedule_from_pulse(synthesize(gate_preset(Gate::kH), {Envelope::kSquare, omega}), p, opt);
  for (const auto& m : s.settings) EXPECT_NEAR(2.0 * bessel_j1(m.beta) * p.g_1a, omega, 1e-9 * omega);
  const PulseSequence too_strong = synthesize(gate_preset(Gate::kH), {Envelope::kSquare, 2.4 * p.g_1a});
  EXPECT_THROW(schedule_from_pulse(too_strong, p, opt), UnreachableAmplitude);
  const PulseSequence sine = synthesize(gate_preset(Gate::kH), {Envelope::kSine, omega});
  EXPECT_THROW(schedule_from_pulse(sine, p, {}), InvalidArgument);
}

TEST(FullModel, SingleExcitationStaysInLogicalSpan) {
  const DeviceParams p;
  const SingleLogicalGate gate = build_single_logical_gate(Gate::kH, uncalibrated(), {});
  const QOperator u = propagate_schedule(gate.hamiltonian, 0.05);
  const auto logical = single_logical_states(p);
  for (Eigen::Index in : logical) {
    double inside = 0.0;
    for (Eigen::Index k : logical) inside += std::norm(u(k, in));
    EXPECT_LE(1.0 - inside, 1e-10);
  }
}

TEST(FullModel, LogicalPopulationsTrackEffectiveModel) {
  const DeviceParams p;
  const SingleLogicalGate gate = build_single_logical_gate(Gate::kH, uncalibrated(), {});
  const QOperator full = single_logical_block(gate, 0.05);
  const QOperator eff = propagate_effective(gate.schedule, p);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) EXPECT_LE(std::abs(std::norm(full(r, c)) - std::norm(eff(r, c))), 0.02);
}

TEST(FullModel, CalibratedGatesReproduceLogicalUnitary) {
  for (Gate g : {Gate::kH, Gate::kT}) {
    const SingleLogicalGate gate = calibrate_single_logical_gate(g, {});
    EXPECT_GT(gate.closed_fidelity, 0.9999) << gate_name(g);
  }
}

TEST(CpSchedule, DesignValues) {
  const DeviceParams p;
  ScheduleOptions opt;
  opt.beta = 1.2;
  const CpGateSchedule cs = cp_gate_schedule(kPi / 2.0, 0.56 * kPi, p, opt);
  EXPECT_NEAR(cs.path.xi2, kPi / (1.0 - std::cos(0.56 * kPi)), 1e-14);
  EXPECT_NEAR(cs.path.xi2, 2.646, 1e-3);
  EXPECT_TRUE(is_unitary(cs.ideal, 1e-15));
  EXPECT_EQ(cs.ideal(2, 2), std::exp(kI * (kPi / 2.0)));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c) EXPECT_EQ(cs.ideal(r, c), cplx(0.0));
  EXPECT_EQ(cs.ideal(0, 0), cplx(1.0));
  EXPECT_EQ(cs.ideal(3, 3), cplx(1.0));
}

TEST(CpSchedule, EffectivePulseAccumulatesZeta) {
  const DeviceParams p;
  ScheduleOptions opt;
  opt.beta = 1.2;
  for (double zeta : {kPi / 4.0, kPi / 2.0}) {
    const CpGateSchedule cs = cp_gate_schedule(zeta, 0.56 * kPi, p, opt);
    const QOperator u = propagate_pulse(cs.schedule.logical_pulse);
    EXPECT_LE(std::abs(u(1, 0)), 1e-6);
    EXPECT_LE(std::abs(u(0, 1)), 1e-6);
    EXPECT_NEAR(std::abs(std::arg(u(0, 0))), zeta, 1e-9);
  }
  const CpGateSchedule small = cp_gate_schedule(1e-9, 0.56 * kPi, p, opt);
  EXPECT_LT(small.path.xi2, 1e-8);
  EXPECT_LT(distance_up_to_global_phase(small.ideal, identity(4)), 1e-8);
}

TEST(CpSchedule, Errors) {
  const DeviceParams p;
  EXPECT_THROW(cp_gate_schedule(kPi / 2.0, kPi / 2.0, p, {}), InfiniteDetuning);
  EXPECT_THROW(cp_gate_schedule(0.0, 0.56 * kPi, p, {}), InvalidArgument);
  EXPECT_THROW(cp_gate_schedule(kTwoPi, 0.56 * kPi, p, {}), InvalidArgument);
  EXPECT_THROW(cp_gate_schedule(1.0, kPi, p, {}), InvalidArgument);
}

TEST(CpSchedule, FullPairModelIsNearlyDiagonal) {
  CpSettings s;
  s.calibration.enabled = false;
  CpGate g = build_cp_gate(s, {0.003, 2.6});
  const QOperator m = cp_logical_block(g, s);
  finalize_cp_gate(g, m);
  EXPECT_GT(g.closed_fidelity, 0.99);
  EXPECT_TRUE(is_unitary(g.target, 1e-12));
}

TEST(Drag, ReducesLeakage) {
  DragSettings with, without;
  without.use_drag = false;
  const double l1 = single_transmon_drag_model(Gate::kH, with).leakage;
  const double l0 = single_transmon_drag_model(Gate::kH, without).leakage;
  EXPECT_LT(l1, l0);
}

TEST(Drag, LargeAnharmonicityLimit) {
  DragSettings s;
  s.device.alpha1 = 1e5;
  s.phase_step = 0.2;
  const TransmonGateResult r = single_transmon_drag_model(Gate::kH, s);
  EXPECT_LT(r.leakage, 1e-6);
  EXPECT_LT(distance_up_to_global_phase(r.logical, propagate_pulse(dynamical_gate(Gate::kH, {Envelope::kSine, drag_peak(s)}))),
            1e-4);
}

TEST(Drag, AmplitudeErrorCostsFidelity) {
  DragSettings s;
  const QOperator ideal = single_transmon_drag_model(Gate::kS, s).logical;
  s.epsilon = 0.05;
  const QOperator off = single_transmon_drag_model(Gate::kS, s).logical;
  EXPECT_LT(gate_fidelity_trace(ideal, off), 0.999);
}

TEST(DynamicalCp, DetunedRabiPhase) {
  // |11> <-> |20> with |20> detuned by delta; one full generalized Rabi cycle.
  for (double delta : {1.0 / std::sqrt(3.0), 0.3, 1.7}) {
    const double omega = 1.0, omega_r = std::hypot(omega, delta);
    const QOperator shift = 0.5 * delta * identity(2);
    const QOperator u = propagate_tdse([&](double) { return QOperator(two_level_hamiltonian(omega, 0.0, delta) + shift); },
                                       {0.0, kTwoPi / omega_r, 1e-3});
    EXPECT_LT(std::abs(u(1, 0)), 1e-9);
    EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-9);
    EXPECT_NEAR(wrap_angle(std::arg(u(0, 0)) - kPi * (1.0 - delta / omega_r)), 0.0, 1e-9);
  }
}

TEST(DynamicalCp, CalibratedCycleCloses) {
  const DynamicalCpSettings s;
  const DynamicalCpGate g = dynamical_cp_baseline(s);
  EXPECT_NEAR(g.omega_d, std::sqrt(3.0) * std::abs(g.delta_d), 1e-9 * g.omega_d);
  const ParametricHamiltonian h = dynamical_cp_hamiltonian(g, s).restricted(transmon_pair_span(s.device));
  const QOperator u = propagate_schedule(h, s.phase_step);
  EXPECT_LT(std::norm(u(5, 3)), 1e-4);
  const QOperator m = block(u, {0, 1, 2, 3});
  const double cp = wrap_angle(std::arg(m(3, 3)) - std::arg(m(1, 1)) - std::arg(m(2, 2)) + std::arg(m(0, 0)));
  EXPECT_NEAR(cp, kPi / 2.0, 0.05);
  EXPECT_GT(g.closed_fidelity, 0.999);
}

TEST(DynamicalCp, ZeroCouplingIsIdentity) {
  DynamicalCpSettings s;
  s.beta = 0.0;
  s.calibration.enabled = false;
  const DynamicalCpGate g = dynamical_cp_schedule(s, {});
  EXPECT_EQ(g.omega_d, 0.0);
  EXPECT_LT((dynamical_cp_block(g, s) - identity(4)).norm(), 1e-15);
}
