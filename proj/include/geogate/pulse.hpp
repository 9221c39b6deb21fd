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

#include <string>
#include <vector>

#include "geogate/core.hpp"

namespace geogate {

enum class Envelope { kSquare, kSine };

inline const char* envelope_name(Envelope e) { return e == Envelope::kSquare ? "square" : "sine"; }

/// Amplitude law shared by all segments of a sequence: constant level or
/// half-sine with the given peak.
struct AmplitudeProfile {
  Envelope envelope = Envelope::kSquare;
  double peak = 1.0;  // rad/us

  void validate() const {
    if (!(peak > 0.0) || !std::isfinite(peak)) throw InvalidArgument("amplitude profile must be strictly positive");
  }
  /// Duration needed to accumulate `area` with this profile.
  double duration_for_area(double area) const {
    return envelope == Envelope::kSquare ? area / peak : kPi * area / (2.0 * peak);
  }
};

/// One control segment on local time s in [0, duration]:
///   Omega(s) = amplitude_scale * amplitude * shape(s)
///   phi(s)   = phi0 + phi_rate * s + phi_per_area * A(s)
///   Delta(s) = detuning_ratio * amplitude * shape(s) + detuning_offset
/// where A(s) is the nominal area accumulated up to s. Keeping detuning and
/// phase tied to the nominal amplitude lets amplitude errors scale Omega alone.
struct Segment {
  double duration = 0.0;
  Envelope envelope = Envelope::kSquare;
  double amplitude = 0.0;
  double amplitude_scale = 1.0;
  double phi0 = 0.0;
  double phi_rate = 0.0;
  double phi_per_area = 0.0;
  double detuning_ratio = 0.0;
  double detuning_offset = 0.0;
  std::string label;

  double shape(double s) const {
    if (envelope == Envelope::kSquare) return 1.0;
    return std::sin(kPi * s / duration);
  }
  double shape_derivative(double s) const {
    if (envelope == Envelope::kSquare) return 0.0;
    return (kPi / duration) * std::cos(kPi * s / duration);
  }
  double nominal_omega(double s) const { return amplitude * shape(s); }
  double omega(double s) const { return amplitude_scale * amplitude * shape(s); }
  double omega_derivative(double s) const { return amplitude_scale * amplitude * shape_derivative(s); }
  double nominal_area_until(double s) const {
    if (envelope == Envelope::kSquare) return amplitude * s;
    return amplitude * (duration / kPi) * (1.0 - std::cos(kPi * s / duration));
  }
  double phi(double s) const { return phi0 + phi_rate * s + phi_per_area * nominal_area_until(s); }
  double phi_derivative(double s) const { return phi_rate + phi_per_area * nominal_omega(s); }
  double delta(double s) const { return detuning_ratio * amplitude * shape(s) + detuning_offset; }
  double delta_derivative(double s) const { return detuning_ratio * amplitude * shape_derivative(s); }

  /// Integral of Omega over the segment.
  double area() const {
    const double base = envelope == Envelope::kSquare ? duration : 2.0 * duration / kPi;
    return amplitude_scale * amplitude * base;
  }
  /// Integral of Delta over the segment.
  double detuning_area() const {
    const double base = envelope == Envelope::kSquare ? duration : 2.0 * duration / kPi;
    return detuning_ratio * amplitude * base + detuning_offset * duration;
  }
};

/// 2x2 control Hamiltonian 1/2 (Omega cos phi sx + Omega sin phi sy - Delta sz).
inline QOperator two_level_hamiltonian(double omega, double phi, double delta) {
  QOperator h(2, 2);
  h(0, 0) = -0.5 * delta;
  h(1, 1) = 0.5 * delta;
  h(0, 1) = 0.5 * omega * std::exp(-kI * phi);
  h(1, 0) = 0.5 * omega * std::exp(kI * phi);
  return h;
}

class PulseSequence {
 public:
  PulseSequence() = default;
  explicit PulseSequence(std::vector<Segment> segments) : segments_(std::move(segments)) {
    for (const auto& s : segments_) {
      if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
        throw InvalidArgument("PulseSequence: segment durations must be positive");
      }
    }
  }

  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<Segment>& mutable_segments() { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }

  double total_time() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration;
    return t;
  }
  double total_area() const {
    double a = 0.0;
    for (const auto& s : segments_) a += s.area();
    return a;
  }

  /// Index of the segment containing global time t and the local time in it.
  std::pair<std::size_t, double> locate(double t) const {
    double start = 0.0;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
      const double end = start + segments_[k].duration;
      if (t <= end || k + 1 == segments_.size()) return {k, std::clamp(t - start, 0.0, segments_[k].duration)};
      start = end;
    }
    throw InvalidArgument("PulseSequence: empty sequence has no segments");
  }

  QOperator hamiltonian(double t) const {
    if (segments_.empty()) return QOperator::Zero(2, 2);
    const auto [k, s] = locate(t);
    const Segment& seg = segments_[k];
    return two_level_hamiltonian(seg.omega(s), seg.phi(s), seg.delta(s));
  }

  PulseSequence then(const PulseSequence& next) const {
    std::vector<Segment> all = segments_;
    all.insert(all.end(), next.segments_.begin(), next.segments_.end());
    return PulseSequence(std::move(all));
  }

 private:
  std::vector<Segment> segments_;
};

/// Exact propagator of a square segment: constant Omega and Delta with a
/// linear phase ramp, solved in the frame co-rotating with the ramp.
inline QOperator propagate_square_segment(const Segment& seg) {
  if (seg.envelope != Envelope::kSquare) throw InvalidArgument("propagate_square_segment: sine envelope");
  const double t = seg.duration;
  const double rate = seg.phi_derivative(0.0);
  const QOperator h0 = two_level_hamiltonian(seg.omega(0.0), seg.phi0, seg.delta(0.0)) - 0.5 * rate * pauli_z();
  QOperator frame = QOperator::Zero(2, 2);
  frame(0, 0) = std::exp(-kI * (0.5 * rate * t));
  frame(1, 1) = std::exp(kI * (0.5 * rate * t));
  return frame * detail::expm_hermitian_2x2(h0, t);
}

/// Propagator of a two-level pulse. Square segments are solved in closed
/// form; shaped segments fall back to propagate_tdse with `max_step`.
inline QOperator propagate_pulse(const PulseSequence& pulse, double max_step = 1e-4) {
  QOperator u = identity(2);
  for (const auto& seg : pulse.segments()) {
    if (seg.envelope == Envelope::kSquare) {
      u = propagate_square_segment(seg) * u;
    } else {
      const Segment copy = seg;
      u = propagate_tdse([&copy](double s) { return two_level_hamiltonian(copy.omega(s), copy.phi(s), copy.delta(s)); },
                         TimeGrid{0.0, seg.duration, std::min(max_step, seg.duration)}) *
          u;
    }
  }
  return u;
}

/// Midpoint propagation of the whole sequence on a global time grid.
inline QOperator propagate_pulse_numeric(const PulseSequence& pulse, double max_step) {
  QOperator u = identity(2);
  for (const auto& seg : pulse.segments()) {
    const Segment copy = seg;
    u = propagate_tdse([&copy](double s) { return two_level_hamiltonian(copy.omega(s), copy.phi(s), copy.delta(s)); },
                       TimeGrid{0.0, seg.duration, std::min(max_step, seg.duration)}) *
        u;
  }
  return u;
}

}  // namespace geogate
