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

#pragma once

#include <functional>
#include <vector>

#include "geogate/geometric.hpp"

namespace geogate {

enum class Axis { kX, kY };

struct RotationSpec {
  Axis axis = Axis::kX;
  double theta = 0.0;
  Envelope envelope = Envelope::kSquare;
  double omega_peak = 1.0;

  void validate() const {
    if (!(theta > -kTwoPi && theta <= kTwoPi)) throw InvalidArgument("RotationSpec: theta outside (-2pi, 2pi]");
    if (!(omega_peak > 0.0)) throw InvalidArgument("RotationSpec: omega_peak must be positive");
  }
};

/// R_a(theta) = exp(-i theta sigma_a / 2).
inline QOperator rotation_matrix(Axis axis, double theta) {
  const QOperator& s = axis == Axis::kX ? pauli_x() : pauli_y();
  return std::cos(theta / 2.0) * identity(2) - kI * std::sin(theta / 2.0) * s;
}

/// Single resonant segment of area |theta|; negative angles flip the phase by pi.
inline PulseSequence rotation_pulse(const RotationSpec& spec) {
  spec.validate();
  if (spec.theta == 0.0) return {};
  const AmplitudeProfile profile{spec.envelope, spec.omega_peak};
  Segment s;
  s.envelope = spec.envelope;
  s.amplitude = spec.omega_peak;
  s.duration = profile.duration_for_area(std::abs(spec.theta));
  s.phi0 = (spec.axis == Axis::kX ? 0.0 : kPi / 2.0) + (spec.theta < 0.0 ? kPi : 0.0);
  s.label = std::string(spec.axis == Axis::kX ? "Rx" : "Ry");
  return PulseSequence({s});
}

/// Rotations in application order (first element acts first).
inline std::vector<std::pair<Axis, double>> dynamical_decomposition(Gate g) {
  switch (g) {
    case Gate::kH: return {{Axis::kY, kPi / 2.0}, {Axis::kX, kPi}};
    case Gate::kS: return {{Axis::kY, kPi / 2.0}, {Axis::kX, kPi / 2.0}, {Axis::kY, -kPi / 2.0}};
    case Gate::kT: return {{Axis::kY, kPi / 2.0}, {Axis::kX, kPi / 4.0}, {Axis::kY, -kPi / 2.0}};
  }
  return {};
}

inline PulseSequence dynamical_gate(Gate g, const AmplitudeProfile& profile) {
  profile.validate();
  PulseSequence out;
  for (const auto& [axis, theta] : dynamical_decomposition(g)) {
    out = out.then(rotation_pulse({axis, theta, profile.envelope, profile.peak}));
  }
  return out;
}

/// Omega_m sin(pi t / tau) on [0, tau].
struct SineEnvelope {
  double omega_m = 1.0;
  double tau = 1.0;

  SineEnvelope(double omega_m_in, double tau_in) : omega_m(omega_m_in), tau(tau_in) {
    if (!(omega_m > 0.0) || !(tau > 0.0)) throw InvalidArgument("sine_envelope: omega_m and tau must be positive");
  }
  double value(double t) const { return omega_m * std::sin(kPi * t / tau); }
  double derivative(double t) const { return omega_m * (kPi / tau) * std::cos(kPi * t / tau); }
  double area() const { return 2.0 * omega_m * tau / kPi; }
};

inline SineEnvelope sine_envelope(double omega_m, double tau) { return {omega_m, tau}; }

/// A real function of time with its analytic derivative.
struct Law {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static Law constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }};
  }
};

/// Control vector B(t) = (Bx, By, Bz) with Bz = -Delta.
struct ControlField {
  Law bx;
  Law by;
  Law bz;

  /// B(t) of one segment; phase and detuning laws differentiated analytically.
  static ControlField from_segment(const Segment& seg) {
    const Segment s = seg;
    ControlField f;
    f.bx = {[s](double t) { return s.omega(t) * std::cos(s.phi(t)); },
            [s](double t) {
              return s.omega_derivative(t) * std::cos(s.phi(t)) - s.omega(t) * s.phi_derivative(t) * std::sin(s.phi(t));
            }};
    f.by = {[s](double t) { return s.omega(t) * std::sin(s.phi(t)); },
            [s](double t) {
              return s.omega_derivative(t) * std::sin(s.phi(t)) + s.omega(t) * s.phi_derivative(t) * std::cos(s.phi(t));
            }};
    f.bz = {[s](double t) { return -s.delta(t); }, [s](double t) { return -s.delta_derivative(t); }};
    return f;
  }
};

/// B_C = B + B_D with B_D = (-dBy/dt + Bz Bx, dBx/dt + Bz By, 0) / (2 alpha).
struct CorrectedField {
  ControlField original;
  double alpha = 0.0;

  double correction_x(double t) const {
    return (-original.by.derivative(t) + original.bz.value(t) * original.bx.value(t)) / (2.0 * alpha);
  }
  double correction_y(double t) const {
    return (original.bx.derivative(t) + original.bz.value(t) * original.by.value(t)) / (2.0 * alpha);
  }
  double bx(double t) const { return original.bx.value(t) + correction_x(t); }
  double by(double t) const { return original.by.value(t) + correction_y(t); }
  double bz(double t) const { return original.bz.value(t); }
};

inline CorrectedField drag_correct(const ControlField& field, double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw InvalidArgument("drag_correct: anharmonicity must be finite and nonzero");
  return {field, alpha};
}

}  // namespace geogate
