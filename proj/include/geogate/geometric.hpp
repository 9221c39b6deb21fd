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

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "geogate/pulse.hpp"

namespace geogate {

enum class Gate { kH, kS, kT };

inline Gate parse_gate(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
  if (name == "H") return Gate::kH;
  if (name == "S") return Gate::kS;
  if (name == "T") return Gate::kT;
  throw InvalidArgument("unknown gate '" + name + "' (expected H, S or T)");
}

inline const char* gate_name(Gate g) {
  switch (g) {
    case Gate::kH: return "H";
    case Gate::kS: return "S";
    case Gate::kT: return "T";
  }
  return "?";
}

/// Textbook target: Hadamard, diag(1, i), diag(1, e^{i pi/4}).
inline QOperator textbook_gate(Gate g) {
  QOperator m = QOperator::Zero(2, 2);
  switch (g) {
    case Gate::kH:
      m << 1.0, 1.0, 1.0, -1.0;
      return m / std::sqrt(2.0);
    case Gate::kS:
      m(0, 0) = 1.0;
      m(1, 1) = kI;
      return m;
    case Gate::kT:
      m(0, 0) = 1.0;
      m(1, 1) = std::exp(kI * (kPi / 4.0));
      return m;
  }
  return m;
}

/// Boundary data of a longitude-latitude-longitude path on the Bloch sphere.
struct PathSpec {
  double chi1 = 0.0;
  double chi2 = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double gamma_prime = 0.0;

  double delta_xi() const { return xi2 - xi1; }
  double xi_minus() const { return 0.5 * (xi2 - xi1); }
  double xi_plus() const { return 0.5 * (xi2 + xi1); }

  void validate() const {
    for (double v : {chi1, chi2, xi1, xi2, gamma_prime}) {
      if (!std::isfinite(v)) throw InvalidArgument("PathSpec: non-finite value");
    }
    if (chi1 < 0.0 || chi1 > kPi || chi2 < 0.0 || chi2 > kPi) {
      throw InvalidArgument("PathSpec: polar angles must lie in [0, pi]");
    }
    const double dxi = delta_xi();
    const double expected = dxi != 0.0 ? std::cos(chi2) : 0.0;
    const double declared = dxi != 0.0 ? 2.0 * gamma_prime / dxi : gamma_prime;
    if (std::abs(expected - declared) > 1e-9) {
      throw InvalidArgument("PathSpec: gamma_prime inconsistent with cos(chi2) = 2 gamma'/(xi2 - xi1)");
    }
  }
};

struct PhasePair {
  double gamma_g = 0.0;
  double gamma_d = 0.0;
};

/// Latitude that makes the three-segment path accumulate total phase gamma'.
inline double solve_chi2(double gamma_prime, double delta_xi) {
  if (delta_xi == 0.0 || !std::isfinite(delta_xi)) throw InvalidArgument("solve_chi2: delta_xi must be nonzero");
  const double c = 2.0 * gamma_prime / delta_xi;
  if (std::abs(c) > 1.0 + 1e-15) throw NoSolution("solve_chi2: |2 gamma'/delta_xi| exceeds 1");
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Half the solid angle enclosed by the path: -(xi2 - xi1)(1 - cos chi2)/2.
inline double geometric_phase(const PathSpec& path) {
  return -path.delta_xi() * (1.0 - std::cos(path.chi2)) / 2.0;
}

/// Noncyclic evolution operator for boundary values (chi0, xi0) -> (chi_tau,
/// xi_tau) with total accumulated phase gamma.
inline QOperator general_evolution_operator(double chi0, double chi_tau, double xi0, double xi_tau, double gamma) {
  const double chim = 0.5 * (chi_tau - chi0);
  const double chip = 0.5 * (chi_tau + chi0);
  const double xim = 0.5 * (xi_tau - xi0);
  const double xip = 0.5 * (xi_tau + xi0);
  const double gp = gamma + xim;
  const double c = std::cos(gp);
  const double s = std::sin(gp);
  QOperator u(2, 2);
  u(0, 0) = cplx(c * std::cos(chim), s * std::cos(chip)) * std::exp(-kI * xim);
  u(0, 1) = cplx(-c * std::sin(chim), s * std::sin(chip)) * std::exp(-kI * xip);
  u(1, 0) = cplx(c * std::sin(chim), s * std::sin(chip)) * std::exp(kI * xip);
  u(1, 1) = cplx(c * std::cos(chim), -s * std::cos(chip)) * std::exp(kI * xim);
  return u;
}

/// Closed-form operator of the three-segment path, gamma' = gamma_g + xi_-.
inline QOperator analytic_unitary(const PathSpec& path) {
  const double gp = geometric_phase(path) + path.xi_minus();
  const double c = std::cos(gp);
  const double s = std::sin(gp);
  const double xim = path.xi_minus();
  const double xip = path.xi_plus();
  QOperator u(2, 2);
  u(0, 0) = cplx(c, s * std::cos(path.chi1)) * std::exp(-kI * xim);
  u(0, 1) = kI * s * std::sin(path.chi1) * std::exp(-kI * xip);
  u(1, 0) = kI * s * std::sin(path.chi1) * std::exp(kI * xip);
  u(1, 1) = cplx(c, -s * std::cos(path.chi1)) * std::exp(kI * xim);
  return u;
}

inline PathSpec gate_preset(Gate g) {
  PathSpec p;
  double dxi = 0.0;
  switch (g) {
    case Gate::kH:
      p.gamma_prime = kPi / 4.0;
      dxi = 3.0 * kPi;
      break;
    case Gate::kS:
      p.gamma_prime = kPi;
      dxi = 5.0 * kPi / 2.0;
      break;
    case Gate::kT:
      p.gamma_prime = kPi;
      dxi = 9.0 * kPi / 4.0;
      break;
  }
  p.chi2 = solve_chi2(p.gamma_prime, dxi);
  p.chi1 = g == Gate::kH ? kPi / 2.0 : p.chi2;
  p.xi1 = -dxi / 2.0;
  p.xi2 = dxi / 2.0;
  return p;
}

inline PathSpec gate_preset(const std::string& name) { return gate_preset(parse_gate(name)); }

/// Segment areas below this are treated as absent.
inline constexpr double kZeroArea = 1e-12;

/// Three-segment control sequence realizing `path`. Zero-area segments are
/// omitted, so paths with chi1 == chi2 yield the latitude segment only.
inline PulseSequence synthesize(const PathSpec& path, const AmplitudeProfile& profile) {
  profile.validate();
  path.validate();
  const double dxi = path.delta_xi();
  if (dxi != 0.0 && std::abs(std::cos(path.chi2)) < 1e-12) {
    throw InfiniteDetuning("synthesize: chi2 = pi/2 makes the latitude detuning -Omega tan(chi2) singular");
  }
  if (dxi != 0.0 && std::abs(1.0 + std::cos(path.chi2)) < 1e-12) {
    throw InvalidArgument("synthesize: latitude at the south pole is not a controllable path");
  }
  std::vector<Segment> segs;
  const double polar_area = std::abs(path.chi2 - path.chi1);
  const double side = path.chi2 > path.chi1 ? 1.0 : -1.0;
  auto make = [&](double area, const char* label) {
    Segment s;
    s.envelope = profile.envelope;
    s.amplitude = profile.peak;
    s.duration = profile.duration_for_area(area);
    s.label = label;
    return s;
  };
  if (polar_area > kZeroArea) {
    Segment s = make(polar_area, "longitude-1");
    s.phi0 = path.xi1 + side * kPi / 2.0;
    segs.push_back(s);
  }
  const double signed_area = dxi * std::sin(2.0 * path.chi2) / 2.0;
  if (std::abs(signed_area) > kZeroArea) {
    Segment s = make(std::abs(signed_area), "latitude");
    s.phi0 = path.xi1 + (signed_area > 0.0 ? kPi : 0.0);
    s.phi_per_area = dxi / std::abs(signed_area);
    s.detuning_ratio = -(signed_area > 0.0 ? 1.0 : -1.0) * std::tan(path.chi2);
    segs.push_back(s);
  }
  if (polar_area > kZeroArea) {
    Segment s = make(polar_area, "longitude-2");
    s.phi0 = path.xi2 - side * kPi / 2.0;
    segs.push_back(s);
  }
  return PulseSequence(std::move(segs));
}

/// Orthogonal evolution state |psi_0(chi, xi)>.
inline Vector evolution_state(double chi, double xi) {
  Vector v(2);
  v(0) = std::cos(chi / 2.0);
  v(1) = std::sin(chi / 2.0) * std::exp(kI * xi);
  return v;
}

struct PhaseAccounting {
  double gamma_d = 0.0;      // -int <Psi_0|H|Psi_0> dt
  double total_phase = 0.0;  // f_0(tau), arg <psi_0(chi1, xi2)|Psi_0(tau)>
};

/// Propagates |psi_0(chi1, xi1)> through the pulse with midpoint steps of at
/// most `max_step`, accumulating the energy expectation by midpoint quadrature.
inline PhaseAccounting phase_accounting(const PulseSequence& pulse, const PathSpec& path, double max_step = 1e-4) {
  Vector psi = evolution_state(path.chi1, path.xi1);
  double gd = 0.0;
  for (const auto& seg : pulse.segments()) {
    const auto n = static_cast<long>(std::ceil(seg.duration / max_step - 1e-12));
    const double h = seg.duration / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
      const double sm = h * (static_cast<double>(k) + 0.5);
      const QOperator hm = two_level_hamiltonian(seg.omega(sm), seg.phi(sm), seg.delta(sm));
      const Vector mid = detail::expm_hermitian_2x2(hm, 0.5 * h) * psi;
      gd -= (mid.adjoint() * hm * mid)(0, 0).real() * h;
      psi = detail::expm_hermitian_2x2(hm, 0.5 * h) * mid;
    }
  }
  const Vector target = evolution_state(path.chi1, path.xi2);
  return {gd, std::arg(target.dot(psi))};
}

inline double dynamical_phase(const PulseSequence& pulse, const PathSpec& path, double max_step = 1e-4) {
  return phase_accounting(pulse, path, max_step).gamma_d;
}

}  // namespace geogate
