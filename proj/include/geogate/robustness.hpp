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

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "geogate/dynamical.hpp"
#include "geogate/parallel.hpp"

namespace geogate {

enum class Scheme { kGeometric, kDynamical };

inline Scheme parse_scheme(const std::string& s) {
  if (s == "geometric") return Scheme::kGeometric;
  if (s == "dynamical") return Scheme::kDynamical;
  throw InvalidArgument("unknown scheme '" + s + "' (expected geometric or dynamical)");
}

inline const char* scheme_name(Scheme s) { return s == Scheme::kGeometric ? "geometric" : "dynamical"; }

/// Two-level control pulse of `gate` under `scheme`.
inline PulseSequence gate_pulse(Scheme scheme, Gate gate, const AmplitudeProfile& profile) {
  return scheme == Scheme::kGeometric ? synthesize(gate_preset(gate), profile) : dynamical_gate(gate, profile);
}

struct ControlError {
  double epsilon = 0.0;
  double eta = 0.0;
  double delta1 = 0.0;  // rad/us, consumed by the device models only
  double delta2 = 0.0;

  void validate() const {
    for (double v : {epsilon, eta, delta1, delta2}) {
      if (!std::isfinite(v)) throw InvalidArgument("ControlError: non-finite value");
    }
  }
};

/// Omega -> (1 + epsilon) Omega and Delta -> Delta + eta Omega_nominal.
inline PulseSequence inject_errors(const PulseSequence& pulse, const ControlError& err) {
  err.validate();
  std::vector<Segment> segs = pulse.segments();
  for (auto& s : segs) {
    s.amplitude_scale *= 1.0 + err.epsilon;
    s.detuning_ratio += err.eta;
  }
  return PulseSequence(std::move(segs));
}

enum class FidelityMode { kMagnitude, kReal };

inline FidelityMode parse_fidelity_mode(const std::string& s) {
  if (s == "magnitude") return FidelityMode::kMagnitude;
  if (s == "real") return FidelityMode::kReal;
  throw InvalidArgument("unknown fidelity mode '" + s + "' (expected magnitude or real)");
}

/// |Tr(U_ideal^dag U_err)| / dim, or the real part in kReal mode.
inline double gate_fidelity_trace(const QOperator& u_ideal, const QOperator& u_err,
                                  FidelityMode mode = FidelityMode::kMagnitude) {
  if (u_ideal.rows() != u_err.rows() || u_ideal.cols() != u_err.cols()) {
    throw InvalidArgument("gate_fidelity_trace: dimension mismatch");
  }
  const cplx tr = (u_ideal.adjoint() * u_err).trace();
  const double dim = static_cast<double>(u_ideal.rows());
  return (mode == FidelityMode::kMagnitude ? std::abs(tr) : tr.real()) / dim;
}

inline double gate_time(const PulseSequence& pulse) { return pulse.total_time(); }

/// Uniform grid of n points on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw InvalidArgument("linspace: need at least one point");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return v;
}

struct ScanResult {
  std::string axis1_label;
  std::string axis2_label;
  std::vector<double> axis1;
  std::vector<double> axis2;
  Eigen::MatrixXd values;  // values(i, j) at (axis1[i], axis2[j])
  std::string gate;
  std::string scheme;
  std::vector<std::string> failures;  // per-cell error messages, scan continues

  std::size_t cell_count() const { return axis1.size() * axis2.size(); }
};

struct ScanOptions {
  AmplitudeProfile profile{};
  FidelityMode mode = FidelityMode::kMagnitude;
  int threads = 1;
};

/// Trace fidelity of the error-injected gate against its ideal counterpart on
/// an (epsilon, eta) grid.
inline ScanResult scan2d(Scheme scheme, Gate gate, const std::vector<double>& eps_grid,
                         const std::vector<double>& eta_grid, const ScanOptions& opt = {}) {
  if (eps_grid.empty() || eta_grid.empty()) throw InvalidArgument("scan2d: grids must be nonempty");
  ScanResult r{"epsilon", "eta", eps_grid, eta_grid,
               Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(eps_grid.size()),
                                         static_cast<Eigen::Index>(eta_grid.size()),
                                         std::numeric_limits<double>::quiet_NaN()),
               gate_name(gate), scheme_name(scheme), {}};
  const PulseSequence nominal = gate_pulse(scheme, gate, opt.profile);
  const QOperator u_ideal = propagate_pulse(nominal);
  const auto n1 = eps_grid.size();
  const auto n2 = eta_grid.size();
  std::vector<std::string> errors(n1 * n2);
  parallel_for(n1 * n2, opt.threads, [&](std::size_t idx) {
    const std::size_t i = idx / n2;
    const std::size_t j = idx % n2;
    try {
      const PulseSequence p = inject_errors(nominal, {eps_grid[i], eta_grid[j], 0.0, 0.0});
      r.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gate_fidelity_trace(u_ideal, propagate_pulse(p), opt.mode);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  });
  for (std::size_t idx = 0; idx < errors.size(); ++idx) {
    if (!errors[idx].empty()) {
      r.failures.push_back("cell (" + std::to_string(idx / n2) + "," + std::to_string(idx % n2) + "): " + errors[idx]);
    }
  }
  return r;
}

/// Fraction of cells where `a` is at least `b` (both scans on the same grid).
inline double dominance_fraction(const ScanResult& a, const ScanResult& b, double slack = 0.0) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw InvalidArgument("dominance_fraction: grids differ");
  }
  long hits = 0;
  for (Eigen::Index k = 0; k < a.values.size(); ++k) {
    if (a.values.data()[k] >= b.values.data()[k] - slack) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(a.values.size());
}

struct AreaRow {
  std::string gate;
  double geometric_area = 0.0;
  double dynamical_area = 0.0;
  double geometric_time = 0.0;  // equal peak amplitude
  double dynamical_time = 0.0;
  double geometric_time_equal_mean = 0.0;  // mean amplitude over each segment equals the peak setting
  double dynamical_time_equal_mean = 0.0;
};

/// Total pulse areas and gate times of both schemes at a common amplitude profile.
inline std::vector<AreaRow> area_table(const AmplitudeProfile& profile) {
  std::vector<AreaRow> rows;
  for (Gate g : {Gate::kH, Gate::kS, Gate::kT}) {
    const PulseSequence geo = gate_pulse(Scheme::kGeometric, g, profile);
    const PulseSequence dyn = gate_pulse(Scheme::kDynamical, g, profile);
    rows.push_back({gate_name(g), geo.total_area(), dyn.total_area(), gate_time(geo), gate_time(dyn),
                    geo.total_area() / profile.peak, dyn.total_area() / profile.peak});
  }
  return rows;
}

}  // namespace geogate
