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

#include "geogate/lindblad.hpp"

namespace geogate {

/// Geometric (encoded) and dynamical (bare) fidelity at one sweep coordinate.
struct SweepPoint {
  double x = 0.0;
  double y = 0.0;
  double geometric = 0.0;
  double dynamical = 0.0;
};

struct SweepResult {
  std::string name;
  std::string x_label;
  std::string y_label;  // empty for one-dimensional sweeps
  std::vector<SweepPoint> points;

  bool geometric_dominates() const {
    for (const auto& p : points) {
      if (p.geometric < p.dynamical) return false;
    }
    return !points.empty();
  }
  /// True when both curves are non-increasing along the point order.
  bool monotone_decreasing(double slack = 0.0) const {
    for (std::size_t k = 1; k < points.size(); ++k) {
      if (points[k].geometric > points[k - 1].geometric + slack) return false;
      if (points[k].dynamical > points[k - 1].dynamical + slack) return false;
    }
    return true;
  }
};

struct SingleComparison {
  Gate gate = Gate::kH;
  SingleLogicalSettings encoded{};
  DragSettings bare{};
  NoiseParams noise{};
  MasterOptions master{};
  int threads = 1;
};

/// F(kappa) for the encoded geometric gate and the bare DRAG gate; kappa sets
/// both transmon rates, resonator rates stay at `noise`.
inline SweepResult single_kappa_sweep(const SingleComparison& c, const SingleLogicalGate& gate,
                                      const std::vector<double>& kappas) {
  SweepResult out{std::string("single-kappa-") + gate_name(c.gate), "kappa", "", {}};
  out.points.resize(kappas.size());
  parallel_for(kappas.size(), c.threads, [&](std::size_t i) {
    NoiseParams n = c.noise;
    n.kappa_minus = n.kappa_z = kappas[i];
    out.points[i] = {kappas[i], 0.0, single_logical_gate_fidelity(gate, n, c.master).fidelity,
                     transmon_gate_fidelity(c.gate, c.bare, n, c.master).fidelity};
  });
  return out;
}

inline SweepResult single_kappa_sweep(const SingleComparison& c, const std::vector<double>& kappas) {
  return single_kappa_sweep(c, calibrate_single_logical_gate(c.gate, c.encoded), kappas);
}

/// F(delta_1) with the calibration held at zero drift.
inline SweepResult single_drift_sweep(const SingleComparison& c, const SingleLogicalGate& gate,
                                      const std::vector<double>& drifts) {
  SweepResult out{std::string("single-drift-") + gate_name(c.gate), "delta1", "", {}};
  out.points.resize(drifts.size());
  parallel_for(drifts.size(), c.threads, [&](std::size_t i) {
    SingleLogicalSettings s = c.encoded;
    s.drift1 = drifts[i];
    const SingleLogicalGate drifted = build_single_logical_gate(c.gate, s, gate.calibration, gate.virtual_z);
    DragSettings d = c.bare;
    d.drift1 = drifts[i];
    out.points[i] = {drifts[i], 0.0, single_logical_gate_fidelity(drifted, c.noise, c.master).fidelity,
                     transmon_gate_fidelity(c.gate, d, c.noise, c.master).fidelity};
  });
  return out;
}

inline SweepResult single_drift_sweep(const SingleComparison& c, const std::vector<double>& drifts) {
  return single_drift_sweep(c, calibrate_single_logical_gate(c.gate, c.encoded), drifts);
}

struct CpComparison {
  CpSettings encoded{};
  DynamicalCpSettings bare{};
  NoiseParams noise{};
  MasterOptions master{};
  int threads = 1;
};

inline SweepResult cp_kappa_sweep(const CpComparison& c, const CpGate& gate, const DynamicalCpGate& base,
                                  const std::vector<double>& kappas) {
  SweepResult out{"cp-kappa", "kappa", "", {}};
  out.points.resize(kappas.size());
  parallel_for(kappas.size(), c.threads, [&](std::size_t i) {
    NoiseParams n = c.noise;
    n.kappa_minus = n.kappa_z = kappas[i];
    out.points[i] = {kappas[i], 0.0, two_logical_gate_fidelity(gate, c.encoded, n, c.master).fidelity,
                     dynamical_cp_fidelity(base, c.bare, n, c.master).fidelity};
  });
  return out;
}

inline SweepResult cp_kappa_sweep(const CpComparison& c, const std::vector<double>& kappas) {
  return cp_kappa_sweep(c, calibrate_cp_gate(c.encoded), dynamical_cp_baseline(c.bare), kappas);
}

/// F on the (delta_1, delta_2) grid, calibrations held at zero drift.
inline SweepResult cp_drift_sweep(const CpComparison& c, const CpGate& gate, const DynamicalCpGate& base,
                                  const std::vector<double>& d1, const std::vector<double>& d2) {
  SweepResult out{"cp-drift", "delta1", "delta2", {}};
  out.points.resize(d1.size() * d2.size());
  parallel_for(out.points.size(), c.threads, [&](std::size_t k) {
    const double a = d1[k / d2.size()], b = d2[k % d2.size()];
    CpSettings e = c.encoded;
    e.drift1 = a;
    e.drift2 = b;
    DynamicalCpSettings d = c.bare;
    d.drift1 = a;
    d.drift2 = b;
    out.points[k] = {a, b, two_logical_gate_fidelity(gate, e, c.noise, c.master).fidelity,
                     dynamical_cp_fidelity(base, d, c.noise, c.master).fidelity};
  });
  return out;
}

inline SweepResult cp_drift_sweep(const CpComparison& c, const std::vector<double>& d1, const std::vector<double>& d2) {
  return cp_drift_sweep(c, calibrate_cp_gate(c.encoded), dynamical_cp_baseline(c.bare), d1, d2);
}

}  // namespace geogate
