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

#include <utility>
#include <vector>

#include "geogate/device.hpp"
#include "geogate/parallel.hpp"

namespace geogate {

struct NoiseParams {
  double kappa_minus = khz(4.0);
  double kappa_z = khz(4.0);
  double kappa_a = khz(1.0);
  double kappa_b = khz(1.0);

  static NoiseParams none() { return {0.0, 0.0, 0.0, 0.0}; }
  /// Equal relaxation and dephasing kappa on every transmon.
  static NoiseParams uniform(double kappa, double kappa_resonator) {
    return {kappa, kappa, kappa_resonator, kappa_resonator};
  }

  void validate() const {
    for (double k : {kappa_minus, kappa_z, kappa_a, kappa_b}) {
      if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("NoiseParams: rates must be finite and >= 0");
    }
  }
};

enum class Role { kTransmon, kResonator };

/// Transmon: {X_minus, X_z}; resonator: {Y}.
inline std::vector<QOperator> collapse_operators(int levels, Role role) {
  if (levels < 2) throw InvalidArgument("collapse_operators: need at least two levels");
  QOperator lower = QOperator::Zero(levels, levels);
  QOperator number = QOperator::Zero(levels, levels);
  for (int j = 0; j + 1 < levels; ++j) {
    lower(j, j + 1) = role == Role::kTransmon ? std::sqrt(j + 1.0) : 1.0;
  }
  for (int j = 0; j < levels; ++j) number(j, j) = j;
  if (role == Role::kResonator) return {lower};
  return {lower, number};
}

struct CollapseSet {
  std::vector<std::pair<QOperator, double>> operators;

  void add(QOperator op, double rate) { operators.emplace_back(std::move(op), rate); }
  double max_rate() const {
    double m = 0.0;
    for (const auto& [op, rate] : operators) m = std::max(m, rate);
    return m;
  }
  void validate(Eigen::Index dim) const {
    for (const auto& [op, rate] : operators) {
      if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidArgument("CollapseSet: rates must be finite and >= 0");
      if (op.rows() != dim || op.cols() != dim) throw InvalidArgument("CollapseSet: operator dimension mismatch");
    }
  }
  CollapseSet restricted(const std::vector<Eigen::Index>& keep) const {
    CollapseSet out;
    for (const auto& [op, rate] : operators) out.add(block(op, keep), rate);
    return out;
  }
};

/// Right-hand side of d rho/dt = -i[H, rho] + sum kappa/2 (2 A rho A^+ - A^+A rho - rho A^+A)
/// applied to horizontally stacked n x n blocks.
class LindbladGenerator {
 public:
  LindbladGenerator(Eigen::Index dim, const CollapseSet& c) : n_(dim), decay_(QOperator::Zero(dim, dim)) {
    c.validate(dim);
    for (const auto& [op, rate] : c.operators) {
      if (rate == 0.0) continue;
      decay_ += rate * op.adjoint() * op;
      std::vector<std::pair<std::pair<Eigen::Index, Eigen::Index>, cplx>> nz;
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index col = 0; col < dim; ++col)
          if (op(r, col) != cplx(0.0)) nz.push_back({{r, col}, op(r, col)});
      for (const auto& [a, wa] : nz)
        for (const auto& [b, wb] : nz) jumps_.push_back({a.first, b.first, a.second, b.second, rate * wa * std::conj(wb)});
    }
  }

  Eigen::Index dim() const { return n_; }

  void apply(const QOperator& h, const QOperator& x, QOperator& out) const {
    const QOperator heff = h - (0.5 * kI) * decay_;
    out.noalias() = (-kI) * (heff * x);
    const QOperator heff_adj = heff.adjoint();
    const Eigen::Index blocks = x.cols() / n_;
    for (Eigen::Index k = 0; k < blocks; ++k) {
      out.middleCols(k * n_, n_).noalias() += kI * (x.middleCols(k * n_, n_) * heff_adj);
    }
    for (const auto& j : jumps_) {
      for (Eigen::Index k = 0; k < blocks; ++k) out(j.r1, k * n_ + j.r2) += j.w * x(j.c1, k * n_ + j.c2);
    }
  }

 private:
  struct Jump {
    Eigen::Index r1, r2, c1, c2;
    cplx w;
  };
  Eigen::Index n_;
  QOperator decay_;
  std::vector<Jump> jumps_;
};

/// Fixed-step RK4 of stacked density blocks over [t0, t1].
template <typename HFn>
long integrate_master(const HFn& h_of_t, const LindbladGenerator& gen, QOperator& x, double t0, double t1, double dt) {
  if (t1 <= t0) return 0;
  const long steps = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-12));
  const double h = (t1 - t0) / static_cast<double>(steps);
  QOperator k1(x.rows(), x.cols()), k2(x.rows(), x.cols()), k3(x.rows(), x.cols()), k4(x.rows(), x.cols());
  QOperator tmp(x.rows(), x.cols());
  for (long s = 0; s < steps; ++s) {
    const double t = t0 + h * static_cast<double>(s);
    const QOperator ha = h_of_t(t);
    const QOperator hm = h_of_t(t + 0.5 * h);
    const QOperator hb = h_of_t(t + h);
    gen.apply(ha, x, k1);
    tmp = x + (0.5 * h) * k1;
    gen.apply(hm, tmp, k2);
    tmp = x + (0.5 * h) * k2;
    gen.apply(hm, tmp, k3);
    tmp = x + h * k3;
    gen.apply(hb, tmp, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!all_finite(x)) throw NumericFailure("integrate_master: non-finite density matrix");
  return steps;
}

/// Step cap: ||H|| dt <= 0.05 and max(kappa) dt <= 1e-3.
inline double master_step(double requested, double norm_h, double max_rate) {
  double dt = requested;
  if (norm_h > 0.0) dt = std::min(dt, kMaxPhaseStep / norm_h);
  if (max_rate > 0.0) dt = std::min(dt, 1e-3 / max_rate);
  return dt;
}

inline constexpr double kPositivityTolerance = -1e-6;

/// Lindblad evolution of a single density matrix with positivity-checked
/// step halving (two retries).
inline QState evolve_master(const HamiltonianFn& h_of_t, const CollapseSet& c, const QState& rho0, const TimeGrid& grid) {
  grid.validate();
  rho0.validate();
  const QOperator r0 = rho0.density_matrix();
  const Eigen::Index n = r0.rows();
  const LindbladGenerator gen(n, c);
  double norm_h = 0.0;
  const int probes = 33;
  for (int k = 0; k < probes; ++k) {
    const double t = grid.t0 + (grid.t1 - grid.t0) * k / (probes - 1.0);
    const QOperator hk = h_of_t(t);
    if (hk.rows() != n) throw InvalidArgument("evolve_master: Hamiltonian dimension mismatch");
    detail::require_hermitian(hk, "evolve_master");
    norm_h = std::max(norm_h, row_sum_norm(hk));
  }
  double dt = master_step(grid.max_step, norm_h, c.max_rate());
  for (int attempt = 0; attempt < 3; ++attempt) {
    QOperator x = r0;
    integrate_master(h_of_t, gen, x, grid.t0, grid.t1, dt);
    QState out = QState::density_unchecked(x);
    if (out.min_eigenvalue() >= kPositivityTolerance) return out;
    dt *= 0.5;
  }
  throw NumericFailure("evolve_master: positivity violated after step halving");
}

// ---------------------------------------------------------------------------
// Averaged logical fidelities.

/// Restricted open-system model with the logical states' positions.
struct OpenModel {
  ParametricHamiltonian hamiltonian;
  CollapseSet collapse;
  std::vector<Eigen::Index> logical;
};

inline OpenModel make_open_model(const ParametricHamiltonian& full, const CollapseSet& jumps,
                                 const std::vector<Eigen::Index>& logical_full) {
  std::vector<QOperator> ops;
  for (const auto& [op, rate] : jumps.operators) {
    if (rate > 0.0) ops.push_back(op);
  }
  const auto keep = reachable_subspace(full.dim(), full.terms(), ops, logical_full);
  std::vector<Eigen::Index> logical;
  for (Eigen::Index l : logical_full) {
    logical.push_back(static_cast<Eigen::Index>(std::lower_bound(keep.begin(), keep.end(), l) - keep.begin()));
  }
  return {full.restricted(keep), jumps.restricted(keep), logical};
}

struct MasterOptions {
  double phase_step = 0.1;  // bound on omega_max * dt
  int theta_points = 0;     // 0 selects 101 (one qubit) or 21 (two qubits)
};

struct FidelityReport {
  double fidelity = 0.0;
  double min_eigenvalue = 0.0;
  double trace_error = 0.0;
  double gate_time = 0.0;
  double step = 0.0;
  long steps = 0;
  Eigen::Index subspace_dim = 0;
};

/// Images Phi(|l_i><l_j|) for i <= j, stacked in row-major pair order.
struct LogicalImages {
  Eigen::Index dim = 0;
  std::vector<Eigen::Index> logical;
  QOperator stacked;
  long steps = 0;
  double step = 0.0;

  std::size_t pair_index(std::size_t i, std::size_t j) const {
    const std::size_t L = logical.size();
    return i * L - i * (i - 1) / 2 + (j - i);
  }
  QOperator image(std::size_t i, std::size_t j) const {
    if (i > j) return image(j, i).adjoint();
    return stacked.middleCols(static_cast<Eigen::Index>(pair_index(i, j)) * dim, dim);
  }
};

inline QOperator initial_pairs(Eigen::Index dim, const std::vector<Eigen::Index>& logical) {
  const std::size_t L = logical.size();
  QOperator x = QOperator::Zero(dim, dim * static_cast<Eigen::Index>(L * (L + 1) / 2));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i; j < L; ++j, ++k) x(logical[i], k * dim + logical[j]) = 1.0;
  return x;
}

/// Propagates all logical coherences through the modulation schedule.
inline LogicalImages evolve_logical_images(const OpenModel& m, const MasterOptions& opt) {
  const ParametricHamiltonian& h = m.hamiltonian;
  const LindbladGenerator gen(h.dim(), m.collapse);
  const double requested = opt.phase_step / std::max(1.0, h.max_frequency());
  const double dt = master_step(requested, h.norm_bound(), m.collapse.max_rate());
  LogicalImages out;
  out.dim = h.dim();
  out.logical = m.logical;
  out.stacked = initial_pairs(h.dim(), m.logical);
  out.step = dt;
  for (const auto& s : h.schedule()) {
    out.steps += integrate_master([&h](double t) { return h(t); }, gen, out.stacked, s.t_start, s.t_end(), dt);
  }
  return out;
}

/// Real-amplitude input states and their weights: cos/sin grid for one qubit,
/// product grid for two.
inline std::vector<std::pair<Vector, double>> logical_input_states(std::size_t logical_dim, int points) {
  std::vector<std::pair<Vector, double>> out;
  if (logical_dim == 2) {
    for (const auto& [th, w] : trapezoid_nodes(points)) {
      Vector c(2);
      c << std::cos(th), std::sin(th);
      out.emplace_back(c, w);
    }
  } else if (logical_dim == 4) {
    const auto nodes = trapezoid_nodes(points);
    for (const auto& [a, wa] : nodes) {
      for (const auto& [b, wb] : nodes) {
        Vector c(4);
        c << std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b);
        out.emplace_back(c, wa * wb);
      }
    }
  } else {
    throw InvalidArgument("logical_input_states: one or two logical qubits only");
  }
  return out;
}

inline int default_points(std::size_t logical_dim, int requested) {
  if (requested > 0) return requested;
  return logical_dim == 2 ? 101 : 21;
}

/// Average of <psi_f| rho_f |psi_f> over the real-amplitude family, with
/// psi_f = target psi in the logical span.
inline FidelityReport average_logical_fidelity(const LogicalImages& img, const QOperator& target, int points) {
  const std::size_t L = img.logical.size();
  if (target.rows() != static_cast<Eigen::Index>(L)) throw InvalidArgument("average_logical_fidelity: target size");
  FidelityReport r;
  r.subspace_dim = img.dim;
  r.steps = img.steps;
  r.step = img.step;
  double trace_err = 0.0;
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = i; j < L; ++j) trace_err = std::max(trace_err, std::abs(img.image(i, j).trace() - cplx(i == j ? 1.0 : 0.0)));
  r.trace_error = trace_err;
  double f = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  const auto inputs = logical_input_states(L, default_points(L, points));
  const std::size_t stride = std::max<std::size_t>(1, inputs.size() / 16);
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    const auto& [c, w] = inputs[n];
    QOperator rho = QOperator::Zero(img.dim, img.dim);
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) rho += c(i) * c(j) * img.image(i, j);
    const Vector tf = target * c;
    Vector psi = Vector::Zero(img.dim);
    for (std::size_t i = 0; i < L; ++i) psi(img.logical[i]) = tf(i);
    f += w * std::real(psi.dot(rho * psi));
    if (n % stride == 0) min_eig = std::min(min_eig, QState::density_unchecked(rho).min_eigenvalue());
  }
  r.fidelity = f;
  r.min_eigenvalue = min_eig;
  if (min_eig < kPositivityTolerance) throw NumericFailure("average_logical_fidelity: positivity violated");
  return r;
}

// ---------------------------------------------------------------------------
// Device fidelities.

inline CollapseSet single_collapse(const DeviceParams& p, const NoiseParams& noise) {
  noise.validate();
  const TensorBasis b = single_basis(p);
  const auto tr = collapse_operators(p.levels_transmon, Role::kTransmon);
  const auto rs = collapse_operators(p.levels_resonator, Role::kResonator);
  CollapseSet c;
  c.add(b.embed(tr[0], 0), noise.kappa_minus);
  c.add(b.embed(tr[1], 0), noise.kappa_z);
  c.add(b.embed(rs[0], 1), noise.kappa_a);
  return c;
}

inline CollapseSet two_collapse(const DeviceParams& p, const NoiseParams& noise) {
  noise.validate();
  const TensorBasis b = two_basis(p);
  const auto tr = collapse_operators(p.levels_transmon, Role::kTransmon);
  const auto rs = collapse_operators(p.levels_resonator, Role::kResonator);
  CollapseSet c;
  for (std::size_t f : {std::size_t{0}, std::size_t{2}}) {
    c.add(b.embed(tr[0], f), noise.kappa_minus);
    c.add(b.embed(tr[1], f), noise.kappa_z);
  }
  c.add(b.embed(rs[0], 1), noise.kappa_a);
  c.add(b.embed(rs[0], 3), noise.kappa_b);
  return c;
}

inline CollapseSet transmon_pair_collapse(const DeviceParams& p, const NoiseParams& noise) {
  noise.validate();
  const TensorBasis b = transmon_pair_basis(p);
  const auto tr = collapse_operators(p.levels_transmon, Role::kTransmon);
  CollapseSet c;
  for (std::size_t f : {std::size_t{0}, std::size_t{1}}) {
    c.add(b.embed(tr[0], f), noise.kappa_minus);
    c.add(b.embed(tr[1], f), noise.kappa_z);
  }
  return c;
}

/// Encoded single-logical-qubit gate fidelity under the full device model.
inline FidelityReport single_logical_gate_fidelity(const SingleLogicalGate& gate, const NoiseParams& noise,
                                                   const MasterOptions& opt = {}) {
  const DeviceParams& p = gate.device;
  const OpenModel m = make_open_model(gate.hamiltonian, single_collapse(p, noise), single_logical_states(p));
  FidelityReport r = average_logical_fidelity(evolve_logical_images(m, opt), gate.target, opt.theta_points);
  r.gate_time = gate.schedule.duration();
  return r;
}

/// Two-logical-qubit CP fidelity on T1 Ra T2 Rb.
inline FidelityReport two_logical_gate_fidelity(const CpGate& gate, const CpSettings& s, const NoiseParams& noise,
                                                const MasterOptions& opt = {}) {
  const DeviceParams& p = s.device;
  const ParametricHamiltonian full(two_basis(p).size(), two_logical_terms(p), gate.design.schedule.settings, 0.0, s.drift2);
  const OpenModel m = make_open_model(full, two_collapse(p, noise), two_logical_states(p));
  FidelityReport r = average_logical_fidelity(evolve_logical_images(m, opt), gate.target, opt.theta_points);
  r.gate_time = gate.design.schedule.duration();
  return r;
}

inline FidelityReport dynamical_cp_fidelity(const DynamicalCpGate& gate, const DynamicalCpSettings& s,
                                            const NoiseParams& noise, const MasterOptions& opt = {}) {
  const OpenModel m = make_open_model(dynamical_cp_hamiltonian(gate, s), transmon_pair_collapse(s.device, noise),
                                      transmon_pair_logical(s.device));
  FidelityReport r = average_logical_fidelity(evolve_logical_images(m, opt), gate.target, opt.theta_points);
  r.gate_time = gate.schedule.front().duration;
  return r;
}

/// Bare transmon dynamical gate (DRAG per settings) against the ideal gate.
inline FidelityReport transmon_gate_fidelity(Gate g, const DragSettings& s, const NoiseParams& noise,
                                             const MasterOptions& opt = {}) {
  const TransmonProgram prog = drag_program(g, s);
  const HamiltonianFn h = drag_hamiltonian(prog, s);
  const auto tr = collapse_operators(s.levels, Role::kTransmon);
  CollapseSet c;
  c.add(tr[0], noise.kappa_minus);
  c.add(tr[1], noise.kappa_z);
  const LindbladGenerator gen(s.levels, c);
  const double norm_h = std::abs(s.device.alpha1) * (s.levels - 2) + 2.0 * drag_peak(s) * std::sqrt(2.0) + std::abs(s.drift1);
  const double dt = master_step(drag_step(s), norm_h, c.max_rate());
  LogicalImages img;
  img.dim = s.levels;
  img.logical = {0, 1};
  img.stacked = initial_pairs(s.levels, img.logical);
  img.step = dt;
  for (std::size_t k = 0; k < prog.starts.size(); ++k) {
    const double end = k + 1 < prog.starts.size() ? prog.starts[k + 1] : prog.total_time;
    img.steps += integrate_master(h, gen, img.stacked, prog.starts[k], end, dt);
  }
  FidelityReport r = average_logical_fidelity(img, transmon_gate_target(g, s), opt.theta_points);
  r.gate_time = prog.total_time;
  return r;
}

}  // namespace geogate
