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

#include "geogate/config.hpp"
#include "geogate/output.hpp"
#include "geogate/sweeps.hpp"

namespace geogate {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  int threads = 1;
  bool sweeps = true;  // report runs without sweeps
};

namespace detail {

inline double khz_axis(double kappa) { return kappa / khz(1.0); }
inline double mhz_axis(double delta) { return delta / mhz(1.0); }

inline std::string dotted(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ".") + p;
  return out;
}

inline Grid curve_grid(const std::string& name, const std::string& label, const SweepResult& r, bool geometric,
                       double (*axis)(double)) {
  Grid g{name, label, "", {}, {0.0}, Eigen::MatrixXd(static_cast<Eigen::Index>(r.points.size()), 1)};
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    g.axis1.push_back(axis(r.points[k].x));
    g.values(static_cast<Eigen::Index>(k), 0) = geometric ? r.points[k].geometric : r.points[k].dynamical;
  }
  return g;
}

inline void add_curve_sweep(ResultBundle& b, const std::string& stem, const std::string& label, const SweepResult& r,
                            double (*axis)(double), bool monotone_check) {
  b.grids.push_back(curve_grid(stem + "_geometric", label, r, true, axis));
  b.grids.push_back(curve_grid(stem + "_dynamical", label, r, false, axis));
  LinePlot lp{stem, label, "fidelity", {{"encoded geometric", {}, {}}, {"bare dynamical", {}, {}}}};
  for (const auto& p : r.points) {
    lp.series[0].x.push_back(axis(p.x));
    lp.series[0].y.push_back(p.geometric);
    lp.series[1].x.push_back(axis(p.x));
    lp.series[1].y.push_back(p.dynamical);
  }
  b.plots.push_back(lp);
  b.add(dotted({stem, "geometric_dominates"}), r.geometric_dominates() ? 1.0 : 0.0);
  if (monotone_check) b.add(dotted({stem, "monotone_decreasing"}), r.monotone_decreasing() ? 1.0 : 0.0);
}

inline void add_surface_sweep(ResultBundle& b, const std::string& stem, const SweepResult& r,
                              const std::vector<double>& d1, const std::vector<double>& d2) {
  for (bool geometric : {true, false}) {
    Grid g{stem + (geometric ? "_geometric" : "_dynamical"), "delta1_over_2pi_mhz", "delta2_over_2pi_mhz", {}, {},
           Eigen::MatrixXd(static_cast<Eigen::Index>(d1.size()), static_cast<Eigen::Index>(d2.size()))};
    for (double v : d1) g.axis1.push_back(mhz_axis(v));
    for (double v : d2) g.axis2.push_back(mhz_axis(v));
    for (std::size_t k = 0; k < r.points.size(); ++k) {
      g.values(static_cast<Eigen::Index>(k / d2.size()), static_cast<Eigen::Index>(k % d2.size())) =
          geometric ? r.points[k].geometric : r.points[k].dynamical;
    }
    b.grids.push_back(g);
  }
  b.add(dotted({stem, "geometric_dominates"}), r.geometric_dominates() ? 1.0 : 0.0);
}

inline SingleLogicalSettings single_settings(const Scenario& s) {
  SingleLogicalSettings out;
  out.device = s.device;
  out.beta = s.beta1;
  out.beta_mode = s.beta_mode;
  out.continuous_phase = s.continuous_phase;
  out.calibration.enabled = s.calibrate;
  return out;
}

inline DragSettings drag_settings(const Scenario& s) {
  DragSettings out;
  out.device = s.device;
  out.beta = s.beta1;
  return out;
}

inline CpSettings cp_settings(const Scenario& s) {
  CpSettings out;
  out.device = s.device;
  out.zeta = s.zeta;
  out.chiL2 = s.chi2;
  out.beta = s.beta2;
  out.continuous_phase = s.continuous_phase;
  out.calibration.enabled = s.calibrate;
  return out;
}

inline DynamicalCpSettings dynamical_cp_settings(const Scenario& s) {
  DynamicalCpSettings out;
  out.device = s.device;
  out.beta = s.beta2;
  out.zeta = s.zeta;
  out.calibration.enabled = s.calibrate;
  return out;
}

inline void run_synth(const Scenario& s, ResultBundle& b) {
  for (Gate g : s.gates) {
    const PathSpec path = gate_preset(g);
    const PulseSequence geo = gate_pulse(Scheme::kGeometric, g, s.profile);
    const PulseSequence dyn = gate_pulse(Scheme::kDynamical, g, s.profile);
    const std::string n = gate_name(g);
    b.add(dotted({"synth", n, "chi1"}), path.chi1);
    b.add(dotted({"synth", n, "chi2"}), path.chi2);
    b.add(dotted({"synth", n, "xi1"}), path.xi1);
    b.add(dotted({"synth", n, "xi2"}), path.xi2);
    b.add(dotted({"synth", n, "gamma_prime"}), path.gamma_prime);
    b.add(dotted({"synth", n, "geometric_phase"}), geometric_phase(path));
    b.add(dotted({"synth", n, "dynamical_phase"}), dynamical_phase(geo, path));
    b.add(dotted({"synth", n, "geometric", "area"}), geo.total_area());
    b.add(dotted({"synth", n, "dynamical", "area"}), dyn.total_area());
    b.add(dotted({"synth", n, "geometric", "gate_time"}), gate_time(geo));
    b.add(dotted({"synth", n, "dynamical", "gate_time"}), gate_time(dyn));
    b.add(dotted({"synth", n, "geometric", "gate_time_equal_mean"}), geo.total_area() / s.profile.peak);
    b.add(dotted({"synth", n, "dynamical", "gate_time_equal_mean"}), dyn.total_area() / s.profile.peak);
  }
}

inline void run_simulate(const Scenario& s, ResultBundle& b) {
  for (Gate g : s.gates) {
    for (Scheme sc : s.schemes) {
      const PulseSequence p = gate_pulse(sc, g, s.profile);
      const QOperator u = propagate_pulse(p);
      const QOperator ideal = textbook_gate(g);
      const std::string stem = dotted({"simulate", gate_name(g), scheme_name(sc)});
      b.add(stem + ".distance_to_textbook", distance_up_to_global_phase(u, ideal));
      b.add(stem + ".fidelity", gate_fidelity_trace(ideal, u, s.fidelity_mode));
      if (sc == Scheme::kGeometric) {
        b.add(stem + ".distance_to_analytic", distance_up_to_global_phase(u, analytic_unitary(gate_preset(g))));
      }
      b.add(stem + ".gate_time", gate_time(p));
    }
  }
}

inline void run_scan(const Scenario& s, const RunOptions& opt, ResultBundle& b, bool keep_grids) {
  ScanOptions so{s.profile, s.fidelity_mode, opt.threads};
  const auto e = s.epsilon.values(), h = s.eta.values();
  for (Gate g : s.gates) {
    std::vector<ScanResult> results;
    for (Scheme sc : s.schemes) {
      ScanResult r = scan2d(sc, g, e, h, so);
      if (!r.failures.empty()) throw NumericFailure("scan " + std::string(gate_name(g)) + ": " + r.failures.front());
      const std::string stem = dotted({"scan", gate_name(g), scheme_name(sc)});
      b.add(stem + ".min", r.values.minCoeff());
      b.add(stem + ".mean", r.values.mean());
      if (keep_grids) {
        b.grids.push_back({std::string("scan_") + gate_name(g) + "_" + scheme_name(sc), "epsilon", "eta", e, h, r.values});
      }
      results.push_back(std::move(r));
    }
    if (results.size() == 2 && s.schemes[0] != s.schemes[1]) {
      const ScanResult& geo = s.schemes[0] == Scheme::kGeometric ? results[0] : results[1];
      const ScanResult& dyn = s.schemes[0] == Scheme::kGeometric ? results[1] : results[0];
      b.add(dotted({"scan", gate_name(g), "dominance_fraction"}), dominance_fraction(geo, dyn));
    }
  }
}

inline void run_master(const Scenario& s, const RunOptions& opt, ResultBundle& b) {
  auto& prov = b.provenance["device_runs"];
  for (Target t : s.targets) {
    if (t == Target::kSingle) {
      for (Gate g : s.gates) {
        SingleComparison c{g, single_settings(s), drag_settings(s), s.noise, s.master, opt.threads};
        const SingleLogicalGate gate = calibrate_single_logical_gate(g, c.encoded);
        const FidelityReport enc = single_logical_gate_fidelity(gate, s.noise, s.master);
        const FidelityReport bare = transmon_gate_fidelity(g, c.bare, s.noise, s.master);
        const std::string n = gate_name(g);
        const std::string stem = dotted({"single", n});
        b.add(stem + ".geometric.fidelity", enc.fidelity);
        b.add(stem + ".geometric.closed_fidelity", gate.closed_fidelity);
        b.add(stem + ".geometric.gate_time", enc.gate_time);
        b.add(stem + ".dynamical.fidelity", bare.fidelity);
        b.add(stem + ".dynamical.gate_time", bare.gate_time);
        b.add(stem + ".dynamical.leakage", single_transmon_drag_model(g, c.bare).leakage);
        prov[stem] = {{"calibration_t_start", gate.calibration.t_start},
                      {"calibration_frequency_offset", gate.calibration.frequency_offset},
                      {"virtual_z", gate.virtual_z},
                      {"geometric_step", enc.step},
                      {"geometric_steps", enc.steps},
                      {"subspace_dim", enc.subspace_dim},
                      {"dynamical_step", bare.step}};
        if (!opt.sweeps) continue;
        if (s.kappa_sweep) {
          add_curve_sweep(b, std::string("single_kappa_") + n, "kappa_over_2pi_khz",
                          single_kappa_sweep(c, gate, s.kappa_sweep->values()), khz_axis, true);
        }
        if (s.delta1_sweep) {
          add_curve_sweep(b, std::string("single_drift_") + n, "delta1_over_2pi_mhz",
                          single_drift_sweep(c, gate, s.delta1_sweep->values()), mhz_axis, false);
        }
      }
    } else {
      CpComparison c{cp_settings(s), dynamical_cp_settings(s), s.noise, s.master, opt.threads};
      const CpGate gate = calibrate_cp_gate(c.encoded);
      const DynamicalCpGate base = dynamical_cp_baseline(c.bare);
      const FidelityReport geo = two_logical_gate_fidelity(gate, c.encoded, s.noise, s.master);
      const FidelityReport dyn = dynamical_cp_fidelity(base, c.bare, s.noise, s.master);
      b.add("cp.geometric.fidelity", geo.fidelity);
      b.add("cp.geometric.closed_fidelity", gate.closed_fidelity);
      b.add("cp.geometric.gate_time", geo.gate_time);
      b.add("cp.dynamical.fidelity", dyn.fidelity);
      b.add("cp.dynamical.closed_fidelity", base.closed_fidelity);
      b.add("cp.dynamical.gate_time", dyn.gate_time);
      prov["cp"] = {{"calibration_t_start", gate.calibration.t_start},
                    {"calibration_frequency_offset", gate.calibration.frequency_offset},
                    {"interaction_frame_phase", gate.ip_phase},
                    {"geometric_step", geo.step},
                    {"geometric_steps", geo.steps},
                    {"subspace_dim", geo.subspace_dim},
                    {"dynamical_calibration_t_start", base.calibration.t_start},
                    {"dynamical_calibration_frequency_offset", base.calibration.frequency_offset},
                    {"dynamical_step", dyn.step}};
      if (!opt.sweeps) continue;
      if (s.kappa_sweep) {
        add_curve_sweep(b, "cp_kappa", "kappa_over_2pi_khz", cp_kappa_sweep(c, gate, base, s.kappa_sweep->values()),
                        khz_axis, true);
      }
      if (s.delta1_sweep || s.delta2_sweep) {
        const std::vector<double> d1 = s.delta1_sweep ? s.delta1_sweep->values() : std::vector<double>{0.0};
        const std::vector<double> d2 = s.delta2_sweep ? s.delta2_sweep->values() : std::vector<double>{0.0};
        add_surface_sweep(b, "cp_drift", cp_drift_sweep(c, gate, base, d1, d2), d1, d2);
      }
    }
  }
}

}  // namespace detail

/// Runs one scenario; every number in the bundle derives from `s` alone.
inline ResultBundle run_scenario(const Scenario& s, const RunOptions& opt = {}) {
  ResultBundle b;
  b.scenario = s.name;
  b.provenance["tool"] = std::string("geogate ") + kVersion;
  b.provenance["scenario"] = s.name;
  b.provenance["kind"] = kind_name(s.kind);
  b.provenance["config_fnv1a"] = fnv1a_hex(s.source);
  b.provenance["config"] = nlohmann::ordered_json::parse(s.source);
  b.provenance["settings"] = {{"two_level_max_step", 1e-4},
                              {"master_phase_step", s.master.phase_step},
                              {"master_theta_points", s.master.theta_points},
                              {"closed_phase_step", SingleLogicalSettings{}.phase_step},
                              {"positivity_tolerance", kPositivityTolerance},
                              {"csv_significant_digits", 12}};
  switch (s.kind) {
    case ScenarioKind::kSynth:
      detail::run_synth(s, b);
      break;
    case ScenarioKind::kSimulate:
      detail::run_simulate(s, b);
      break;
    case ScenarioKind::kScan:
      detail::run_scan(s, opt, b, true);
      break;
    case ScenarioKind::kMaster:
      detail::run_master(s, opt, b);
      break;
    case ScenarioKind::kReport: {
      RunOptions o = opt;
      o.sweeps = false;
      detail::run_synth(s, b);
      detail::run_simulate(s, b);
      detail::run_scan(s, o, b, false);
      detail::run_master(s, o, b);
      break;
    }
  }
  return b;
}

}  // namespace geogate
