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

#include "geogate/geometric.hpp"

using namespace geogate;

namespace {

/// Bisection root of gamma' = -dxi (1 - cos chi)/2 + dxi/2 over chi in [0, pi].
double chi2_by_bisection(double gamma_prime, double dxi) {
  auto f = [&](double chi) { return -dxi * (1.0 - std::cos(chi)) / 2.0 + dxi / 2.0 - gamma_prime; };
  double lo = 0.0, hi = kPi;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) > 0.0) == (f(mid) > 0.0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// -1/2 int xi_dot (1 - cos chi) dt along the propagated evolution state.
double geometric_phase_by_line_integral(const PulseSequence& pulse, const PathSpec& path) {
  Vector psi = evolution_state(path.chi1, path.xi1);
  auto angles = [](const Vector& v) {
    const double chi = 2.0 * std::atan2(std::abs(v(1)), std::abs(v(0)));
    return std::pair{chi, std::arg(v(1)) - std::arg(v(0))};
  };
  double acc = 0.0;
  auto [chi_prev, xi_prev] = angles(psi);
  for (const auto& seg : pulse.segments()) {
    const int n = 20000;
    const double h = seg.duration / n;
    for (int k = 0; k < n; ++k) {
      const double s = h * (k + 0.5);
      psi = matrix_exponential(two_level_hamiltonian(seg.omega(s), seg.phi(s), seg.delta(s)), h) * psi;
      const auto [chi, xi] = angles(psi);
      const double dxi = wrap_angle(xi - xi_prev);
      acc += -0.5 * dxi * (1.0 - std::cos(0.5 * (chi + chi_prev)));
      chi_prev = chi;
      xi_prev = xi;
    }
  }
  return acc;
}

const AmplitudeProfile kSquare{Envelope::kSquare, 1.0};
const AmplitudeProfile kSine{Envelope::kSine, 1.0};

}  // namespace

TEST(SolveChi2, PresetValuesMatchBisectionOracle) {
  EXPECT_NEAR(solve_chi2(kPi / 4, 3 * kPi), std::acos(1.0 / 6.0), 1e-12);
  EXPECT_NEAR(solve_chi2(kPi, 5 * kPi / 2), std::acos(4.0 / 5.0), 1e-12);
  EXPECT_NEAR(solve_chi2(kPi, 9 * kPi / 4), std::acos(8.0 / 9.0), 1e-12);
  EXPECT_NEAR(solve_chi2(kPi / 4, 3 * kPi), chi2_by_bisection(kPi / 4, 3 * kPi), 1e-12);
  EXPECT_NEAR(solve_chi2(kPi, 5 * kPi / 2), chi2_by_bisection(kPi, 5 * kPi / 2), 1e-12);
  EXPECT_NEAR(solve_chi2(kPi, 9 * kPi / 4), chi2_by_bisection(kPi, 9 * kPi / 4), 1e-12);
}

TEST(SolveChi2, NoSolutionOutsideUnitInterval) {
  EXPECT_THROW(solve_chi2(2.0, 1.0), NoSolution);
  EXPECT_THROW(solve_chi2(1.0, 0.0), InvalidArgument);
}

TEST(SolveChi2, RoundTripRecoversGammaPrime) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double dxi = 10.0 * u(rng) + (u(rng) > 0 ? 0.1 : -0.1);
    const double gp = 0.5 * dxi * u(rng);
    PathSpec p{0.3, solve_chi2(gp, dxi), 0.2, 0.2 + dxi, gp};
    EXPECT_NEAR(geometric_phase(p) + p.xi_minus(), gp, 1e-9);
  }
}

TEST(GeometricPhase, ClosedFormCases) {
  EXPECT_EQ(geometric_phase({0.0, 0.0, 0.0, 2.5, 0.0}), 0.0);
  EXPECT_NEAR(geometric_phase({kPi / 2, kPi / 2, 0.0, kPi, 0.0}), -kPi / 2, 1e-15);
  EXPECT_NEAR(geometric_phase(gate_preset(Gate::kH)), -5 * kPi / 4, 1e-12);
}

TEST(GeometricPhase, MatchesLineIntegralAlongPropagatedPath) {
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const PathSpec p = gate_preset(g);
    const double quad = geometric_phase_by_line_integral(synthesize(p, kSquare), p);
    EXPECT_NEAR(quad, geometric_phase(p), 1e-6) << gate_name(g);
  }
}

TEST(GeometricPhase, EquatorOrangeSlice) {
  const PathSpec p{kPi / 2, kPi / 2, -0.4, 1.9, 0.0};
  EXPECT_NEAR(geometric_phase(p), -p.delta_xi() / 2, 1e-9);
}

TEST(Synthesize, PresetAreasFollowAreaConvention) {
  const PathSpec h = gate_preset(Gate::kH);
  const PulseSequence ph = synthesize(h, kSquare);
  ASSERT_EQ(ph.size(), 3u);
  const double c2 = h.chi2;
  EXPECT_NEAR(ph.segments()[0].area(), std::abs(c2 - kPi / 2), 1e-14);
  EXPECT_NEAR(ph.segments()[1].area(), 3 * kPi * std::abs(std::sin(2 * c2)) / 2, 1e-13);
  EXPECT_NEAR(ph.total_area(), 1.883722, 1e-6);
  EXPECT_EQ(ph.segments()[0].delta(0.1), 0.0);
  EXPECT_NEAR(ph.segments()[1].delta(0.1), -ph.segments()[1].omega(0.1) * std::tan(c2), 1e-13);
  EXPECT_EQ(ph.segments()[2].delta(0.1), 0.0);
  EXPECT_NEAR(synthesize(gate_preset(Gate::kS), kSquare).total_area(), 3.769911, 1e-6);
  EXPECT_NEAR(synthesize(gate_preset(Gate::kT), kSquare).total_area(), 2.878471, 1e-6);
}

TEST(Synthesize, PropagationReproducesAnalyticOperator) {
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const PathSpec p = gate_preset(g);
    const PulseSequence pulse = synthesize(p, kSquare);
    const QOperator target = analytic_unitary(p);
    EXPECT_LT(distance_up_to_global_phase(propagate_pulse(pulse), target), 1e-12) << gate_name(g);
    EXPECT_LT(distance_up_to_global_phase(propagate_pulse_numeric(pulse, 2e-4), target), 1e-6) << gate_name(g);
  }
}

TEST(Synthesize, ArbitraryPathsReproduceAnalyticOperator) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 50) {
    const double dxi = (u(rng) > 0.5 ? 1.0 : -1.0) * (0.3 + 8.0 * u(rng));
    const double chi2 = 0.05 + (kPi - 0.1) * u(rng);
    if (std::abs(std::cos(chi2)) < 1e-3) continue;
    const PathSpec p{kPi * u(rng), chi2, 2.0 * u(rng), 0.0, dxi * std::cos(chi2) / 2.0};
    PathSpec q = p;
    q.xi2 = q.xi1 + dxi;
    const PulseSequence pulse = synthesize(q, {Envelope::kSquare, 0.5 + u(rng)});
    EXPECT_LT(distance_up_to_global_phase(propagate_pulse(pulse), analytic_unitary(q)), 1e-10);
    ++checked;
  }
}

TEST(Synthesize, PulseShapeInvariance) {
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const PathSpec p = gate_preset(g);
    const QOperator square = propagate_pulse(synthesize(p, kSquare));
    const QOperator sine = propagate_pulse_numeric(synthesize(p, kSine), 1e-4);
    EXPECT_LT(distance_up_to_global_phase(square, sine), 1e-6) << gate_name(g);
  }
}

TEST(Synthesize, DynamicalPhaseVanishesAndTotalPhaseIsGeometric) {
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const PathSpec p = gate_preset(g);
    for (const auto& prof : {kSquare, kSine}) {
      const PhaseAccounting acc = phase_accounting(synthesize(p, prof), p, 2e-5);
      EXPECT_LT(std::abs(acc.gamma_d), 1e-6) << gate_name(g);
      EXPECT_LT(std::abs(wrap_angle(acc.total_phase - geometric_phase(p) - acc.gamma_d)), 1e-6) << gate_name(g);
    }
  }
}

TEST(Synthesize, IdentityPathIsEmpty) {
  const PathSpec p{0.7, 0.7, 0.3, 0.3, 0.0};
  const PulseSequence pulse = synthesize(p, kSquare);
  EXPECT_TRUE(pulse.empty());
  EXPECT_LT(max_abs(propagate_pulse(pulse) - identity(2)), 1e-15);
  EXPECT_LT(max_abs(analytic_unitary(p) - identity(2)), 1e-15);
}

TEST(Synthesize, EquatorLatitudeIsSingular) {
  EXPECT_THROW(synthesize({0.0, kPi / 2, 0.0, 1.0, 0.0}, kSquare), InfiniteDetuning);
}

TEST(Synthesize, RejectsNonPositiveProfile) {
  EXPECT_THROW(synthesize(gate_preset(Gate::kH), {Envelope::kSquare, 0.0}), InvalidArgument);
  EXPECT_THROW(synthesize(gate_preset(Gate::kH), {Envelope::kSine, -1.0}), InvalidArgument);
}

TEST(Synthesize, RejectsInconsistentGammaPrime) {
  PathSpec p = gate_preset(Gate::kH);
  p.gamma_prime += 0.01;
  EXPECT_THROW(synthesize(p, kSquare), InvalidArgument);
}

TEST(Synthesize, ReversedPolarOrderUsesMirroredPhases) {
  PathSpec p{2.5, 0.9, 0.1, 0.0, 0.0};
  const double dxi = 2.2;
  p.xi2 = p.xi1 + dxi;
  p.gamma_prime = dxi * std::cos(p.chi2) / 2.0;
  const PulseSequence pulse = synthesize(p, kSquare);
  ASSERT_EQ(pulse.size(), 3u);
  EXPECT_NEAR(pulse.segments()[0].phi0, p.xi1 - kPi / 2, 1e-15);
  EXPECT_NEAR(pulse.segments()[2].phi0, p.xi2 + kPi / 2, 1e-15);
  EXPECT_LT(distance_up_to_global_phase(propagate_pulse(pulse), analytic_unitary(p)), 1e-12);
}

TEST(AnalyticUnitary, TrivialPathIsIdentity) {
  EXPECT_LT(max_abs(analytic_unitary({0.4, 0.4, 0.0, 0.0, 0.0}) - identity(2)), 1e-15);
}

TEST(AnalyticUnitary, PresetsAreTextbookGates) {
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    EXPECT_LT(distance_up_to_global_phase(analytic_unitary(gate_preset(g)), textbook_gate(g)), 1e-9) << gate_name(g);
  }
}

TEST(AnalyticUnitary, DiagonalPresetsRelativePhase) {
  const QOperator s = analytic_unitary(gate_preset(Gate::kS));
  const QOperator t = analytic_unitary(gate_preset(Gate::kT));
  EXPECT_NEAR(wrap_angle(std::arg(s(1, 1) / s(0, 0)) - kPi / 2), 0.0, 1e-12);
  EXPECT_NEAR(wrap_angle(std::arg(t(1, 1) / t(0, 0)) - kPi / 4), 0.0, 1e-12);
}

TEST(GeneralEvolutionOperator, CyclicReductionMatchesThreeSegmentForm) {
  const PathSpec p = gate_preset(Gate::kH);
  const QOperator u = general_evolution_operator(p.chi1, p.chi1, p.xi1, p.xi2, geometric_phase(p));
  EXPECT_LT(max_abs(u - analytic_unitary(p)), 1e-14);
}

TEST(GeneralEvolutionOperator, TrivialBoundaryIsIdentity) {
  EXPECT_LT(max_abs(general_evolution_operator(0.8, 0.8, 0.0, 0.0, 0.0) - identity(2)), 1e-15);
}

TEST(GeneralEvolutionOperator, RandomBoundariesAreUnitary) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    EXPECT_TRUE(is_unitary(general_evolution_operator(u(rng), u(rng), u(rng), u(rng), u(rng)), 1e-12));
  }
}

TEST(GeneralEvolutionOperator, MatchesOpenPathPropagation) {
  // The first two segments carry the state from (chi1, xi1) to (chi2, xi2).
  const PathSpec p = gate_preset(Gate::kH);
  const PulseSequence full = synthesize(p, kSquare);
  const PulseSequence open(std::vector<Segment>(full.segments().begin(), full.segments().begin() + 2));
  const QOperator u = general_evolution_operator(p.chi1, p.chi2, p.xi1, p.xi2, geometric_phase(p));
  EXPECT_LT(max_abs(propagate_pulse(open) - u), 1e-12);
}

TEST(GatePreset, ParsesNamesAndRejectsUnknown) {
  EXPECT_EQ(parse_gate("h"), Gate::kH);
  EXPECT_THROW(gate_preset("X"), InvalidArgument);
  const PathSpec h = gate_preset("H");
  EXPECT_NEAR(h.xi_plus(), 0.0, 1e-15);
  EXPECT_NEAR(h.chi1, kPi / 2, 0.0);
}
