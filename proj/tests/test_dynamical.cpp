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

#include "geogate/dynamical.hpp"

using namespace geogate;

TEST(RotationPulse, XPiIsMinusISigmaX) {
  const QOperator u = propagate_pulse(rotation_pulse({Axis::kX, kPi, Envelope::kSquare, 2.0}));
  EXPECT_LT(distance_up_to_global_phase(u, -kI * pauli_x()), 1e-12);
  EXPECT_LT(max_abs(u - (-kI) * pauli_x()), 1e-12);
}

TEST(RotationPulse, YHalfPi) {
  const QOperator u = propagate_pulse(rotation_pulse({Axis::kY, kPi / 2, Envelope::kSquare, 1.0}));
  EXPECT_LT(max_abs(u - (identity(2) - kI * pauli_y()) / std::sqrt(2.0)), 1e-12);
}

TEST(RotationPulse, InverseCompositionIsIdentity) {
  for (double theta : {0.3, 1.7, kPi, 5.9}) {
    const PulseSequence fwd = rotation_pulse({Axis::kX, theta, Envelope::kSquare, 1.0});
    const PulseSequence back = rotation_pulse({Axis::kX, -theta, Envelope::kSquare, 1.0});
    EXPECT_LT(max_abs(propagate_pulse(fwd.then(back)) - identity(2)), 1e-9);
  }
}

TEST(RotationPulse, SineEnvelopeHasSameArea) {
  const PulseSequence p = rotation_pulse({Axis::kY, 1.1, Envelope::kSine, 3.0});
  EXPECT_NEAR(p.total_area(), 1.1, 1e-14);
  EXPECT_LT(max_abs(propagate_pulse(p, 1e-5) - rotation_matrix(Axis::kY, 1.1)), 1e-9);
}

TEST(RotationPulse, RejectsInvalidSpecs) {
  EXPECT_THROW(rotation_pulse({Axis::kX, 7.0, Envelope::kSquare, 1.0}), InvalidArgument);
  EXPECT_THROW(rotation_pulse({Axis::kX, 1.0, Envelope::kSquare, 0.0}), InvalidArgument);
}

TEST(DynamicalGate, AreasFollowComposition) {
  const AmplitudeProfile prof{Envelope::kSquare, 1.0};
  EXPECT_NEAR(dynamical_gate(Gate::kH, prof).total_area(), 3 * kPi / 2, 1e-14);
  EXPECT_NEAR(dynamical_gate(Gate::kS, prof).total_area(), 3 * kPi / 2, 1e-14);
  EXPECT_NEAR(dynamical_gate(Gate::kT, prof).total_area(), 5 * kPi / 4, 1e-14);
}

TEST(DynamicalGate, MatchesTextbookGatesAndMatrixComposition) {
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    QOperator composed = identity(2);
    for (const auto& [axis, theta] : dynamical_decomposition(g)) composed = rotation_matrix(axis, theta) * composed;
    const QOperator u = propagate_pulse(dynamical_gate(g, {Envelope::kSquare, 1.0}));
    EXPECT_LT(max_abs(u - composed), 1e-12) << gate_name(g);
    EXPECT_LT(distance_up_to_global_phase(u, textbook_gate(g)), 1e-9) << gate_name(g);
    EXPECT_LT(distance_up_to_global_phase(u, analytic_unitary(gate_preset(g))), 1e-9) << gate_name(g);
  }
}

TEST(DynamicalPhase, ResonantXPiOnEquatorStateIsNonzero) {
  const PulseSequence p = rotation_pulse({Axis::kX, kPi, Envelope::kSquare, 1.0});
  const PathSpec start{kPi / 2, kPi / 2, 0.0, 0.0, 0.0};
  EXPECT_NEAR(std::abs(dynamical_phase(p, start, 1e-4)), kPi / 2, 1e-6);
}

TEST(DynamicalPhase, ZeroHamiltonianGivesZero) {
  Segment s;
  s.duration = 1.0;
  s.amplitude = 0.0;
  EXPECT_EQ(dynamical_phase(PulseSequence({s}), {0.4, 0.4, 0.1, 0.1, 0.0}), 0.0);
}

TEST(SineEnvelope, AreaAndPeak) {
  const SineEnvelope e = sine_envelope(kPi * kPi / 4, 0.37);
  EXPECT_NEAR(e.area(), 2 * e.omega_m * e.tau / kPi, 1e-15);
  EXPECT_NEAR(e.value(e.tau / 2), e.omega_m, 1e-12);
  EXPECT_NEAR(e.value(0.0), 0.0, 1e-15);
  EXPECT_NEAR(e.value(e.tau), 0.0, 1e-12);
  // Composite Simpson quadrature oracle.
  const int n = 2000;
  const double h = e.tau / n;
  double acc = e.value(0.0) + e.value(e.tau);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * e.value(k * h);
  EXPECT_NEAR(acc * h / 3.0, e.area(), 1e-10);
  EXPECT_THROW(sine_envelope(0.0, 1.0), InvalidArgument);
}

TEST(DragCorrect, ConstantFieldWithoutDetuningIsUnchanged) {
  ControlField f{Law::constant(0.7), Law::constant(-0.2), Law::constant(0.0)};
  const CorrectedField c = drag_correct(f, 3.0);
  EXPECT_EQ(c.correction_x(0.3), 0.0);
  EXPECT_EQ(c.correction_y(0.3), 0.0);
}

TEST(DragCorrect, SineEnvelopeMatchesSymbolicDerivative) {
  const double om = 4.0, tau = 0.8, alpha = 15.0;
  Segment s;
  s.envelope = Envelope::kSine;
  s.amplitude = om;
  s.duration = tau;
  const CorrectedField c = drag_correct(ControlField::from_segment(s), alpha);
  for (double t : {0.0, 0.1, 0.4, 0.77}) {
    EXPECT_NEAR(c.correction_x(t), 0.0, 1e-15);
    EXPECT_NEAR(c.correction_y(t), (kPi * om / tau) * std::cos(kPi * t / tau) / (2 * alpha), 1e-13);
    EXPECT_EQ(c.bz(t), 0.0);
  }
}

TEST(DragCorrect, AnalyticDerivativesMatchFiniteDifferences) {
  Segment s;
  s.envelope = Envelope::kSine;
  s.amplitude = 3.0;
  s.duration = 1.0;
  s.phi0 = 0.4;
  s.phi_per_area = 0.9;
  s.detuning_ratio = -0.6;
  const ControlField f = ControlField::from_segment(s);
  const double h = 1e-6;
  for (double t : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(f.bx.derivative(t), (f.bx.value(t + h) - f.bx.value(t - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(f.by.derivative(t), (f.by.value(t + h) - f.by.value(t - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(f.bz.derivative(t), (f.bz.value(t + h) - f.bz.value(t - h)) / (2 * h), 1e-6);
  }
}

TEST(DragCorrect, LargeAnharmonicityLimit) {
  Segment s;
  s.envelope = Envelope::kSine;
  s.amplitude = 5.0;
  s.duration = 0.5;
  const ControlField f = ControlField::from_segment(s);
  const CorrectedField c = drag_correct(f, 1e15);
  for (double t : {0.1, 0.25, 0.4}) {
    EXPECT_NEAR(c.bx(t), f.bx.value(t), 1e-12);
    EXPECT_NEAR(c.by(t), f.by.value(t), 1e-12);
  }
}

TEST(DragCorrect, ZeroAnharmonicityRejected) {
  EXPECT_THROW(drag_correct({Law::constant(1.0), Law::constant(0.0), Law::constant(0.0)}, 0.0), InvalidArgument);
}
