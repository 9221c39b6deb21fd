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
#include <deque>
#include <set>
#include <vector>

#include "geogate/bessel.hpp"
#include "geogate/dynamical.hpp"
#include "geogate/robustness.hpp"

namespace geogate {

struct DeviceParams {
  double g_1a = mhz(20.0);
  double g_a2 = mhz(8.0);
  double delta1 = mhz(180.0);
  double delta2 = mhz(500.0);
  double alpha1 = mhz(240.0);
  double alpha2 = mhz(220.0);
  int levels_transmon = 3;
  int levels_resonator = 3;

  void validate() const {
    if (!(g_1a >= 0.0) || !(g_a2 >= 0.0) || !std::isfinite(g_1a) || !std::isfinite(g_a2)) {
      throw InvalidArgument("DeviceParams: couplings must be finite and non-negative");
    }
    for (double v : {delta1, delta2, alpha1, alpha2}) {
      if (!std::isfinite(v)) throw InvalidArgument("DeviceParams: non-finite frequency");
    }
    if (levels_transmon < 3 || levels_resonator < 3) {
      throw InvalidArgument("DeviceParams: truncations must keep at least three levels");
    }
  }
};

/// Product basis with the first factor most significant.
class TensorBasis {
 public:
  explicit TensorBasis(std::vector<int> dims) : dims_(std::move(dims)) {
    size_ = 1;
    for (int d : dims_) size_ *= d;
  }
  Eigen::Index size() const { return size_; }
  const std::vector<int>& dims() const { return dims_; }
  Eigen::Index index(const std::vector<int>& digits) const {
    if (digits.size() != dims_.size()) throw InvalidArgument("TensorBasis: wrong number of digits");
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (digits[k] < 0 || digits[k] >= dims_[k]) throw InvalidArgument("TensorBasis: digit out of range");
      idx = idx * dims_[k] + digits[k];
    }
    return idx;
  }
  std::vector<int> digits(Eigen::Index idx) const {
    std::vector<int> out(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      out[k] = static_cast<int>(idx % dims_[k]);
      idx /= dims_[k];
    }
    return out;
  }
  /// Embeds a single-factor operator with identities on the other factors.
  QOperator embed(const QOperator& op, std::size_t factor) const {
    QOperator out = identity(1);
    for (std::size_t k = 0; k < dims_.size(); ++k) out = kron(out, k == factor ? op : identity(dims_[k]));
    return out;
  }

 private:
  std::vector<int> dims_;
  Eigen::Index size_ = 1;
};

/// amplitude * e^{i (frequency + drift1_coeff d1 + drift2_coeff d2) t} m(t) |row><col| + h.c.,
/// with m(t) the parametric modulation factor.
struct CouplingTerm {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double drift1_coeff = 0.0;
  double drift2_coeff = 0.0;
};

/// Exchange terms raising factor `up` and lowering factor `down`:
/// |m+1, n-1><m, n| with amplitude g sqrt(m+1) sqrt(n) and frequency
/// base - m alpha_up + (n-1) alpha_down.
inline std::vector<CouplingTerm> exchange_terms(const TensorBasis& basis, std::size_t up, std::size_t down, double g,
                                                double base, double alpha_up, double alpha_down, double drift1_coeff,
                                                double drift2_coeff) {
  std::vector<CouplingTerm> terms;
  for (Eigen::Index s = 0; s < basis.size(); ++s) {
    std::vector<int> d = basis.digits(s);
    const int m = d[up];
    const int n = d[down];
    if (n < 1 || m + 1 >= basis.dims()[up]) continue;
    d[up] = m + 1;
    d[down] = n - 1;
    terms.push_back({basis.index(d), s, g * std::sqrt(m + 1.0) * std::sqrt(static_cast<double>(n)),
                     base - m * alpha_up + (n - 1) * alpha_down, drift1_coeff, drift2_coeff});
  }
  return terms;
}

/// Frequency-modulation settings of one schedule segment. The modulation
/// factor is exp(-i beta cos(nu t + phi) + i phase_offset); resonance
/// bookkeeping reference - nu = -(delta_L + mu).
struct ModulationSettings {
  double t_start = 0.0;
  double duration = 0.0;
  double reference = 0.0;
  double nu = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  double mu = 0.0;
  double delta_L = 0.0;
  double phase_offset = 0.0;

  double t_end() const { return t_start + duration; }
  double bookkeeping_residual() const { return (reference - nu) + (delta_L + mu); }
  cplx factor(double t) const { return std::exp(kI * (-beta * std::cos(nu * t + phi) + phase_offset)); }
  /// Accumulated modulation phase at t.
  double accumulated_phase(double t) const { return -beta * std::cos(nu * t + phi) + phase_offset; }
};

/// Settings with nu fixed by the resonance bookkeeping.
inline ModulationSettings make_modulation(double reference, double beta, double phi, double mu, double delta_L) {
  ModulationSettings m;
  m.reference = reference;
  m.beta = beta;
  m.phi = phi;
  m.mu = mu;
  m.delta_L = delta_L;
  m.nu = reference + delta_L + mu;
  return m;
}

/// Explicitly time-dependent interaction-picture Hamiltonian built from
/// coupling terms and a piecewise modulation schedule.
class ParametricHamiltonian {
 public:
  ParametricHamiltonian(Eigen::Index dim, std::vector<CouplingTerm> terms, std::vector<ModulationSettings> schedule,
                        double drift1 = 0.0, double drift2 = 0.0)
      : dim_(dim), terms_(std::move(terms)), schedule_(std::move(schedule)), drift1_(drift1), drift2_(drift2) {
    if (schedule_.empty()) throw InvalidArgument("ParametricHamiltonian: empty schedule");
  }

  Eigen::Index dim() const { return dim_; }
  const std::vector<CouplingTerm>& terms() const { return terms_; }
  const std::vector<ModulationSettings>& schedule() const { return schedule_; }

  const ModulationSettings& active(double t) const {
    for (const auto& m : schedule_) {
      if (t <= m.t_end()) return m;
    }
    return schedule_.back();
  }

  QOperator operator()(double t) const {
    QOperator h = QOperator::Zero(dim_, dim_);
    const cplx mod = active(t).factor(t);
    for (const auto& term : terms_) {
      const double w = term.frequency + term.drift1_coeff * drift1_ + term.drift2_coeff * drift2_;
      const cplx c = term.amplitude * std::exp(kI * (w * t)) * mod;
      h(term.row, term.col) += c;
      h(term.col, term.row) += std::conj(c);
    }
    return h;
  }

  /// Upper bound on the fastest phase rotation of any matrix element.
  double max_frequency() const {
    double wmax = 0.0;
    for (const auto& term : terms_) {
      const double w = std::abs(term.frequency + term.drift1_coeff * drift1_ + term.drift2_coeff * drift2_);
      for (const auto& m : schedule_) wmax = std::max(wmax, w + std::abs(m.beta * m.nu));
    }
    return wmax;
  }

  /// Same Hamiltonian on the span of `keep`; terms leaving the span are rejected.
  ParametricHamiltonian restricted(const std::vector<Eigen::Index>& keep) const {
    std::vector<Eigen::Index> pos(static_cast<std::size_t>(dim_), -1);
    for (std::size_t k = 0; k < keep.size(); ++k) pos[static_cast<std::size_t>(keep[k])] = static_cast<Eigen::Index>(k);
    std::vector<CouplingTerm> out;
    for (const auto& term : terms_) {
      const Eigen::Index r = pos[static_cast<std::size_t>(term.row)];
      const Eigen::Index c = pos[static_cast<std::size_t>(term.col)];
      if (r < 0 && c < 0) continue;
      if (r < 0 || c < 0) throw InvalidArgument("restricted: subspace is not invariant under the Hamiltonian");
      CouplingTerm t = term;
      t.row = r;
      t.col = c;
      out.push_back(t);
    }
    return ParametricHamiltonian(static_cast<Eigen::Index>(keep.size()), std::move(out), schedule_, drift1_, drift2_);
  }

  ParametricHamiltonian with_schedule(std::vector<ModulationSettings> schedule) const {
    return ParametricHamiltonian(dim_, terms_, std::move(schedule), drift1_, drift2_);
  }

  ParametricHamiltonian with_drift(double drift1, double drift2) const {
    return ParametricHamiltonian(dim_, terms_, schedule_, drift1, drift2);
  }

  /// Bound on the row-sum norm valid at every time.
  double norm_bound() const {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(dim_);
    for (const auto& term : terms_) {
      rows(term.row) += std::abs(term.amplitude);
      rows(term.col) += std::abs(term.amplitude);
    }
    return dim_ == 0 ? 0.0 : rows.maxCoeff();
  }

 private:
  Eigen::Index dim_;
  std::vector<CouplingTerm> terms_;
  std::vector<ModulationSettings> schedule_;
  double drift1_;
  double drift2_;
};

/// Smallest index set containing `initial` that is closed under the coupling
/// terms and under the given jump operators.
inline std::vector<Eigen::Index> reachable_subspace(Eigen::Index dim, const std::vector<CouplingTerm>& terms,
                                                    const std::vector<QOperator>& jumps,
                                                    const std::vector<Eigen::Index>& initial) {
  std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(dim));
  for (const auto& t : terms) {
    adj[static_cast<std::size_t>(t.row)].push_back(t.col);
    adj[static_cast<std::size_t>(t.col)].push_back(t.row);
  }
  for (const auto& a : jumps) {
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c)
        if (a(r, c) != cplx(0.0)) adj[static_cast<std::size_t>(c)].push_back(r);
  }
  std::set<Eigen::Index> seen(initial.begin(), initial.end());
  std::deque<Eigen::Index> queue(initial.begin(), initial.end());
  while (!queue.empty()) {
    const Eigen::Index s = queue.front();
    queue.pop_front();
    for (Eigen::Index n : adj[static_cast<std::size_t>(s)]) {
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Single logical qubit: transmon T1 (factor 0) and resonator Ra (factor 1).

inline TensorBasis single_basis(const DeviceParams& p) { return TensorBasis({p.levels_transmon, p.levels_resonator}); }

inline std::vector<CouplingTerm> single_logical_terms(const DeviceParams& p) {
  p.validate();
  return exchange_terms(single_basis(p), 0, 1, p.g_1a, p.delta1, p.alpha1, 0.0, 1.0, 0.0);
}

/// Logical states |0>_L = |10>, |1>_L = |01>.
inline std::vector<Eigen::Index> single_logical_states(const DeviceParams& p) {
  const TensorBasis b = single_basis(p);
  return {b.index({1, 0}), b.index({0, 1})};
}

inline QOperator single_logical_hamiltonian(const DeviceParams& p, const ModulationSettings& mod, double t,
                                            double drift1 = 0.0) {
  return ParametricHamiltonian(single_basis(p).size(), single_logical_terms(p), {mod}, drift1)(t);
}

// ---------------------------------------------------------------------------
// Two logical qubits: T1 (0), Ra (1), T2 (2), Rb (3); the modulated coupling
// acts on the Ra-T2 pair.

inline TensorBasis two_basis(const DeviceParams& p) {
  return TensorBasis({p.levels_transmon, p.levels_resonator, p.levels_transmon, p.levels_resonator});
}

inline std::vector<CouplingTerm> two_logical_terms(const DeviceParams& p) {
  p.validate();
  return exchange_terms(two_basis(p), 2, 1, p.g_a2, p.delta2, p.alpha2, 0.0, 0.0, 1.0);
}

/// {|00>_L, |01>_L, |10>_L, |11>_L} = {|1010>, |1001>, |0110>, |0101>}.
inline std::vector<Eigen::Index> two_logical_states(const DeviceParams& p) {
  const TensorBasis b = two_basis(p);
  return {b.index({1, 0, 1, 0}), b.index({1, 0, 0, 1}), b.index({0, 1, 1, 0}), b.index({0, 1, 0, 1})};
}

inline Eigen::Index two_logical_ancilla(const DeviceParams& p) { return two_basis(p).index({0, 0, 2, 0}); }

inline QOperator two_logical_hamiltonian(const DeviceParams& p, const ModulationSettings& mod, double t,
                                         double drift2 = 0.0) {
  return ParametricHamiltonian(two_basis(p).size(), two_logical_terms(p), {mod}, 0.0, drift2)(t);
}

// ---------------------------------------------------------------------------
// Effective control and schedule mapping.

enum class Channel { kSingle, kPair };

/// Resonance reference: Delta_1 for the single-qubit channel, Delta_2 - alpha_2
/// for the two-excitation pair channel.
inline double channel_reference(Channel c, const DeviceParams& p) {
  return c == Channel::kSingle ? p.delta1 : p.delta2 - p.alpha2;
}

/// Omega_L = 2 J1(beta) g (single) or 2 sqrt(2) J1(beta) g_a2 (pair).
inline double effective_amplitude(Channel c, const DeviceParams& p, double beta) {
  return c == Channel::kSingle ? 2.0 * bessel_j1(beta) * p.g_1a : 2.0 * std::sqrt(2.0) * bessel_j1(beta) * p.g_a2;
}

inline double channel_gain(Channel c, const DeviceParams& p) {
  return c == Channel::kSingle ? 2.0 * p.g_1a : 2.0 * std::sqrt(2.0) * p.g_a2;
}

struct EffectiveControl {
  double omega_L = 0.0;
  double delta_L = 0.0;
  double mu = 0.0;
  double phase0 = 0.0;           // phi_L(t) = mu t + phase0
  double adiabaticity = 0.0;     // |delta_L + mu| / min(reference, nu)

  double phi_L(double t) const { return mu * t + phase0; }
  /// 2x2 effective Hamiltonian in the frame rotating with delta_L.
  QOperator hamiltonian(double t) const { return two_level_hamiltonian(omega_L, phi_L(t), delta_L); }
  /// Same dynamics in the interaction picture (no diagonal term).
  QOperator interaction_hamiltonian(double t) const { return two_level_hamiltonian(omega_L, phi_L(t) + delta_L * t, 0.0); }
};

inline EffectiveControl effective_logical_hamiltonian(const DeviceParams& p, const ModulationSettings& mod,
                                                      Channel c = Channel::kSingle) {
  const double scale = std::max({std::abs(mod.reference), std::abs(mod.nu), 1.0});
  if (std::abs(mod.bookkeeping_residual()) > 1e-12 * scale) {
    throw InvalidArgument("effective_logical_hamiltonian: resonance bookkeeping violated");
  }
  EffectiveControl e;
  e.omega_L = effective_amplitude(c, p, mod.beta);
  e.delta_L = mod.delta_L;
  e.mu = mod.mu;
  e.phase0 = mod.phi - mod.phase_offset + kPi / 2.0;
  e.adiabaticity = std::abs(mod.delta_L + mod.mu) / std::max(1e-300, std::min(std::abs(mod.reference), std::abs(mod.nu)));
  return e;
}

enum class BetaMode { kPinned, kAmplitudeMatch };

struct ScheduleOptions {
  Channel channel = Channel::kSingle;
  BetaMode beta_mode = BetaMode::kPinned;
  double beta = 2.1;
  double t_start = 0.0;
  double frequency_offset = 0.0;  // added to every delta_L (sideband calibration)
  bool continuous_phase = true;
};

struct DeviceSchedule {
  std::vector<ModulationSettings> settings;
  PulseSequence logical_pulse;  // the two-level pulse realized, durations as scheduled
  double frame_phase = 0.0;     // Lambda = sum delta_L * duration
  Channel channel = Channel::kSingle;

  double t_start() const { return settings.empty() ? 0.0 : settings.front().t_start; }
  double t_end() const { return settings.empty() ? 0.0 : settings.back().t_end(); }
  double duration() const { return t_end() - t_start(); }
};

namespace detail {

/// Root of -phi + beta cos(nu t + phi) + theta = -des closest to des.
inline double continuity_phase(double des, double beta, double nu, double t, double theta) {
  auto f = [&](double ph) { return -ph + beta * std::cos(nu * t + ph) + theta + des; };
  const int n = 600;
  const double lo = des - 3.0 * kPi - std::abs(beta) - std::abs(theta);
  const double hi = des + 3.0 * kPi + std::abs(beta) + std::abs(theta);
  double best = std::numeric_limits<double>::quiet_NaN();
  double x0 = lo, f0 = f(lo);
  for (int k = 1; k <= n; ++k) {
    const double x1 = lo + (hi - lo) * k / n;
    const double f1 = f(x1);
    if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const double root = 0.5 * (a + b);
      if (std::isnan(best) || std::abs(root - des) < std::abs(best - des)) best = root;
    }
    x0 = x1;
    f0 = f1;
  }
  if (std::isnan(best)) throw NumericFailure("continuity_phase: no root found");
  return best;
}

}  // namespace detail

/// Maps a square-envelope logical pulse to per-segment modulation settings.
/// The designed logical phase at each segment start is matched exactly and the
/// accumulated modulation phase is kept continuous across segment boundaries.
inline DeviceSchedule schedule_from_pulse(const PulseSequence& pulse, const DeviceParams& p,
                                          const ScheduleOptions& opt = {}) {
  p.validate();
  const double ref = channel_reference(opt.channel, p);
  const double gain = channel_gain(opt.channel, p);
  DeviceSchedule out;
  out.channel = opt.channel;
  std::vector<Segment> realized;
  double t = opt.t_start;
  double lambda = 0.0;
  double theta = 0.0;
  for (const auto& seg : pulse.segments()) {
    if (seg.envelope != Envelope::kSquare) {
      throw InvalidArgument("schedule_from_pulse: segments must have constant amplitude");
    }
    const double omega = seg.omega(0.0);
    double beta = opt.beta;
    double duration = seg.duration;
    double omega_L = omega;
    if (opt.beta_mode == BetaMode::kPinned) {
      omega_L = gain * bessel_j1(beta);
      if (!(omega_L > 0.0)) throw InvalidArgument("schedule_from_pulse: pinned beta gives zero coupling");
      duration = seg.area() / omega_L;
    } else {
      if (omega > gain * kBesselJ1Max) {
        throw UnreachableAmplitude("schedule_from_pulse: segment amplitude exceeds 2 max(J1) g");
      }
      beta = bessel_j1_rising_inverse(omega / gain);
    }
    const double stretch = seg.duration / duration;
    const double mu = seg.phi_derivative(0.0) * stretch;
    const double delta_design = seg.delta(0.0) * stretch;
    ModulationSettings m = make_modulation(ref, beta, 0.0, mu, delta_design + opt.frequency_offset);
    m.t_start = t;
    m.duration = duration;
    const double des = seg.phi0 + lambda - (m.mu + m.delta_L) * t - kPi / 2.0;
    if (opt.continuous_phase) {
      m.phi = detail::continuity_phase(des, beta, m.nu, t, theta);
      m.phase_offset = beta * std::cos(m.nu * t + m.phi) + theta;
    } else {
      m.phi = des;
      m.phase_offset = 0.0;
    }
    theta = m.accumulated_phase(m.t_end());
    lambda += m.delta_L * duration;
    t += duration;
    out.settings.push_back(m);

    Segment r = seg;
    r.duration = duration;
    r.amplitude = omega_L;
    r.amplitude_scale = 1.0;
    r.phi_rate = mu;
    r.phi_per_area = 0.0;
    r.detuning_ratio = 0.0;
    r.detuning_offset = delta_design;
    realized.push_back(r);
  }
  out.logical_pulse = PulseSequence(std::move(realized));
  out.frame_phase = lambda;
  return out;
}

/// Virtual-Z frame diag(e^{-i Lambda/2}, e^{i Lambda/2}).
inline QOperator logical_frame(double lambda) {
  QOperator v = QOperator::Zero(2, 2);
  v(0, 0) = std::exp(-kI * (lambda / 2.0));
  v(1, 1) = std::exp(kI * (lambda / 2.0));
  return v;
}

/// Rotating-wave logical Hamiltonian of a schedule in the interaction picture.
inline HamiltonianFn effective_schedule_hamiltonian(const DeviceSchedule& s, const DeviceParams& p) {
  std::vector<EffectiveControl> eff;
  for (const auto& m : s.settings) eff.push_back(effective_logical_hamiltonian(p, m, s.channel));
  return [s, eff](double t) {
    std::size_t k = 0;
    while (k + 1 < s.settings.size() && t > s.settings[k].t_end()) ++k;
    return eff[k].interaction_hamiltonian(t);
  };
}

/// Interaction-picture target of a scheduled two-level pulse: V(Lambda) U.
inline QOperator scheduled_target(const DeviceSchedule& s) {
  return logical_frame(s.frame_phase) * propagate_pulse(s.logical_pulse);
}

/// Default integration step for modulated Hamiltonians: phase_step / omega_max.
inline double modulated_step(const ParametricHamiltonian& h, double phase_step) {
  return phase_step / std::max(1.0, h.max_frequency());
}

/// Piecewise midpoint propagation through every schedule segment.
inline QOperator propagate_schedule(const ParametricHamiltonian& h, double phase_step) {
  const double dt = modulated_step(h, phase_step);
  QOperator u = identity(h.dim());
  for (const auto& m : h.schedule()) {
    if (m.duration <= 0.0) continue;
    u = propagate_tdse([&h](double t) { return h(t); }, {m.t_start, m.t_end(), std::min(dt, m.duration)}) * u;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Real-amplitude state averages.

/// Trapezoid nodes on [0, 2 pi] with `points` samples including both ends.
inline std::vector<std::pair<double, double>> trapezoid_nodes(int points) {
  if (points < 2) throw InvalidArgument("trapezoid_nodes: need at least two points");
  std::vector<std::pair<double, double>> nodes;
  const double h = kTwoPi / (points - 1);
  for (int k = 0; k < points; ++k) {
    const double w = (k == 0 || k == points - 1) ? 0.5 : 1.0;
    nodes.emplace_back(h * k, w * h / kTwoPi);
  }
  return nodes;
}

/// Average of |<psi| T^dag M |psi>|^2 over psi = cos(th)|0> + sin(th)|1> for a
/// (possibly non-unitary) logical block M.
inline double closed_average_single(const QOperator& target, const QOperator& m, int points = 101) {
  double f = 0.0;
  for (const auto& [th, w] : trapezoid_nodes(points)) {
    Vector psi(2);
    psi << std::cos(th), std::sin(th);
    f += w * std::norm((target * psi).dot(m * psi));
  }
  return f;
}

/// Two-qubit product-state analogue on a points x points grid.
inline double closed_average_two(const QOperator& target, const QOperator& m, int points = 21) {
  const auto nodes = trapezoid_nodes(points);
  double f = 0.0;
  for (const auto& [a, wa] : nodes) {
    for (const auto& [b, wb] : nodes) {
      Vector psi(4);
      psi << std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b);
      f += wa * wb * std::norm((target * psi).dot(m * psi));
    }
  }
  return f;
}

/// Sub-block of `u` on the listed states.
inline QOperator block(const QOperator& u, const std::vector<Eigen::Index>& idx) {
  QOperator out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(idx[i], idx[j]);
  return out;
}

/// Golden-section maximization of f on [a, b].
template <typename F>
double golden_maximize(F&& f, double a, double b, int iterations = 40) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

/// Scans f on `points` uniform samples of [a, b) and refines the best one.
template <typename F>
double scan_maximize(F&& f, double a, double b, int points) {
  const double h = (b - a) / points;
  double best_x = a, best_f = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double x = a + h * k;
    const double v = f(x);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  }
  const double refined = golden_maximize(f, best_x - h, best_x + h, 30);
  return f(refined) >= best_f ? refined : best_x;
}

// ---------------------------------------------------------------------------
// Closed-system calibration shared by the gate families.

struct Calibration {
  bool enabled = true;
  double t_start = 0.0;           // used as given when disabled
  double frequency_offset = 0.0;  // used as given when disabled
  int start_points = 24;
  double offset_lo = -6.0;
  double offset_hi = 6.0;
  int offset_points = 13;

  void validate() const {
    if (!std::isfinite(t_start) || !std::isfinite(frequency_offset)) throw InvalidArgument("Calibration: non-finite value");
    if (enabled && (start_points < 1 || offset_points < 1 || !(offset_hi > offset_lo))) {
      throw InvalidArgument("Calibration: malformed scan ranges");
    }
  }
};

struct CalibrationPoint {
  double t_start = 0.0;
  double frequency_offset = 0.0;
};

/// Sideband offset scan, start-time scan over one modulation period, then a
/// golden refinement of the offset; score(t_start, offset) is maximized.
template <typename Score>
CalibrationPoint calibrate_schedule(const Calibration& c, double period, Score&& score) {
  c.validate();
  if (!c.enabled) return {c.t_start, c.frequency_offset};
  double off = scan_maximize([&](double o) { return score(c.t_start, o); }, c.offset_lo, c.offset_hi, c.offset_points);
  const double t0 = scan_maximize([&](double t) { return score(t, off); }, 0.0, period, c.start_points);
  const double h = (c.offset_hi - c.offset_lo) / c.offset_points;
  const double refined = golden_maximize([&](double o) { return score(t0, o); }, off - h, off + h, 30);
  if (score(t0, refined) >= score(t0, off)) off = refined;
  return {t0, off};
}

/// Virtual Z rotation diag(e^{-i theta/2}, e^{i theta/2}).
inline QOperator virtual_z(double theta) { return logical_frame(theta); }

/// Virtual Z angle maximizing the closed single-qubit average of Z target vs m.
inline double fit_virtual_z(const QOperator& target, const QOperator& m) {
  return scan_maximize([&](double th) { return closed_average_single(virtual_z(th) * target, m); }, -kPi, kPi, 36);
}

// ---------------------------------------------------------------------------
// Encoded single-logical-qubit geometric gate.

struct SingleLogicalSettings {
  DeviceParams device{};
  double beta = 2.1;
  BetaMode beta_mode = BetaMode::kPinned;
  double drift1 = 0.0;
  bool continuous_phase = true;
  Calibration calibration{};
  double phase_step = 0.05;  // omega_max * dt
};

struct SingleLogicalGate {
  Gate gate = Gate::kH;
  DeviceParams device;
  DeviceSchedule schedule;
  QOperator target;  // interaction-picture logical target Z(theta) V(Lambda) U
  ParametricHamiltonian hamiltonian;
  double omega_L = 0.0;
  CalibrationPoint calibration;
  double virtual_z = 0.0;
  double closed_fidelity = 0.0;
};

/// Geometric two-level pulse at the pinned effective amplitude.
inline PulseSequence single_logical_pulse(Gate g, const SingleLogicalSettings& s) {
  const double omega_L = effective_amplitude(Channel::kSingle, s.device, s.beta);
  return synthesize(gate_preset(g), {Envelope::kSquare, omega_L});
}

inline SingleLogicalGate build_single_logical_gate(Gate g, const SingleLogicalSettings& s, CalibrationPoint cal,
                                                   double virtual_z_angle = 0.0) {
  ScheduleOptions opt;
  opt.channel = Channel::kSingle;
  opt.beta_mode = s.beta_mode;
  opt.beta = s.beta;
  opt.t_start = cal.t_start;
  opt.frequency_offset = cal.frequency_offset;
  opt.continuous_phase = s.continuous_phase;
  DeviceSchedule sched = schedule_from_pulse(single_logical_pulse(g, s), s.device, opt);
  ParametricHamiltonian h(single_basis(s.device).size(), single_logical_terms(s.device), sched.settings, s.drift1);
  const QOperator target = virtual_z(virtual_z_angle) * scheduled_target(sched);
  return {g,   s.device, std::move(sched), target, std::move(h), effective_amplitude(Channel::kSingle, s.device, s.beta),
          cal, virtual_z_angle, 0.0};
}

/// Closed-system logical block of the gate (exact on the one-excitation span).
inline QOperator single_logical_block(const SingleLogicalGate& gate, double phase_step) {
  const ParametricHamiltonian sub = gate.hamiltonian.restricted(single_logical_states(gate.device));
  return propagate_schedule(sub, phase_step);
}

/// Calibrates start time, sideband offset and virtual Z at zero drift, then
/// builds the gate with the configured drift.
inline SingleLogicalGate calibrate_single_logical_gate(Gate g, const SingleLogicalSettings& s) {
  SingleLogicalSettings probe = s;
  probe.drift1 = 0.0;
  auto score = [&](double t, double off) {
    const SingleLogicalGate trial = build_single_logical_gate(g, probe, {t, off});
    const QOperator m = single_logical_block(trial, probe.phase_step);
    return closed_average_single(virtual_z(fit_virtual_z(trial.target, m)) * trial.target, m);
  };
  const double period = kTwoPi / std::abs(channel_reference(Channel::kSingle, s.device));
  const CalibrationPoint cal = calibrate_schedule(s.calibration, period, score);
  const SingleLogicalGate bare = build_single_logical_gate(g, probe, cal);
  const double theta = fit_virtual_z(bare.target, single_logical_block(bare, probe.phase_step));
  SingleLogicalGate gate = build_single_logical_gate(g, s, cal, theta);
  gate.closed_fidelity = closed_average_single(gate.target, single_logical_block(gate, s.phase_step));
  return gate;
}

// ---------------------------------------------------------------------------
// Two-logical-qubit controlled phase.

struct CpSettings {
  DeviceParams device{};
  double zeta = kPi / 2.0;
  double chiL2 = 0.56 * kPi;
  double beta = 1.2;
  double drift1 = 0.0;
  double drift2 = 0.0;
  bool continuous_phase = true;
  Calibration calibration{};
  double phase_step = 0.05;
};

struct CpGateSchedule {
  DeviceSchedule schedule;
  QOperator ideal;  // diag{1, 1, e^{i zeta}, 1}
  PathSpec path;
};

/// Pair-channel geometric schedule for U_CP(zeta).
inline CpGateSchedule cp_gate_schedule(double zeta, double chiL2, const DeviceParams& p, const ScheduleOptions& opt) {
  if (!(zeta > 0.0 && zeta < kTwoPi)) throw InvalidArgument("cp_gate_schedule: zeta must lie in (0, 2 pi)");
  if (!(chiL2 > 0.0 && chiL2 < kPi)) throw InvalidArgument("cp_gate_schedule: chiL2 must lie in (0, pi)");
  if (std::abs(std::cos(chiL2)) < 1e-12) throw InfiniteDetuning("cp_gate_schedule: chiL2 = pi/2");
  PathSpec path;
  path.chi1 = 0.0;
  path.chi2 = chiL2;
  path.xi1 = 0.0;
  path.xi2 = 2.0 * zeta / (1.0 - std::cos(chiL2));
  path.gamma_prime = path.xi2 * std::cos(chiL2) / 2.0;
  ScheduleOptions o = opt;
  o.channel = Channel::kPair;
  const double omega_L = effective_amplitude(Channel::kPair, p, o.beta);
  const PulseSequence pulse = synthesize(path, {Envelope::kSquare, omega_L});
  QOperator ideal = identity(4);
  ideal(2, 2) = std::exp(kI * zeta);
  return {schedule_from_pulse(pulse, p, o), ideal, path};
}

/// Logical-basis images in the Ra-T2 pair space {00, 01, 10, 11, 02, 20}.
struct PairSpace {
  TensorBasis basis{{3, 3}};
  std::vector<Eigen::Index> states;   // ordered as listed above
  std::vector<Eigen::Index> logical;  // |00>_L..|11>_L images: 01, 00, 11, 10
  Eigen::Index ancilla = 0;           // 02
};

inline PairSpace pair_space(const DeviceParams& p) {
  PairSpace s;
  s.basis = TensorBasis({p.levels_resonator, p.levels_transmon});
  for (const auto& d : std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}}) {
    s.states.push_back(s.basis.index(d));
  }
  s.logical = {1, 0, 3, 2};
  s.ancilla = 4;
  return s;
}

/// Ra-T2 pair Hamiltonian restricted to excitations <= 2 (spectators omitted).
inline ParametricHamiltonian cp_pair_hamiltonian(const DeviceParams& p, const std::vector<ModulationSettings>& sched,
                                                 double drift2) {
  const PairSpace ps = pair_space(p);
  const auto terms = exchange_terms(ps.basis, 1, 0, p.g_a2, p.delta2, p.alpha2, 0.0, 0.0, 1.0);
  return ParametricHamiltonian(ps.basis.size(), terms, sched, 0.0, drift2).restricted(ps.states);
}

/// Local phases (a, b) on the two logical qubits.
struct LocalZ {
  double a = 0.0;
  double b = 0.0;
  QOperator matrix() const {
    QOperator z = QOperator::Zero(4, 4);
    z(0, 0) = 1.0;
    z(1, 1) = std::exp(kI * b);
    z(2, 2) = std::exp(kI * a);
    z(3, 3) = std::exp(kI * (a + b));
    return z;
  }
};

/// Local phases that, applied after `target`, best align its diagonal with `m`.
inline LocalZ fit_local_z(const QOperator& target, const QOperator& m) {
  auto ph = [&](int k) { return std::arg(m(k, k) * std::conj(target(k, k))); };
  // Split the diagonal phase errors into c + {0, b, a, a+b} by circular means.
  const double p00 = ph(0), p01 = ph(1) - p00, p10 = ph(2) - p00, p11 = ph(3) - p00;
  const double a = std::arg(std::exp(kI * p10) + std::exp(kI * (p11 - p01)));
  const double b = std::arg(std::exp(kI * p01) + std::exp(kI * (p11 - p10)));
  return {a, b};
}

struct CpGate {
  CpGateSchedule design;
  QOperator target;  // logical target in the interaction picture, frame and local-Z applied
  CalibrationPoint calibration;
  LocalZ local_z;
  double closed_fidelity = 0.0;
  double ip_phase = 0.0;  // entangling phase obtained without the frame transformation
};

inline QOperator cp_frame(double lambda) {
  QOperator v = identity(4);
  v(2, 2) = std::exp(kI * (lambda / 2.0));
  return v;
}

inline CpGate build_cp_gate(const CpSettings& s, CalibrationPoint cal) {
  ScheduleOptions opt;
  opt.beta = s.beta;
  opt.t_start = cal.t_start;
  opt.frequency_offset = cal.frequency_offset;
  opt.continuous_phase = s.continuous_phase;
  CpGate g;
  g.design = cp_gate_schedule(s.zeta, s.chiL2, s.device, opt);
  g.calibration = cal;
  g.target = cp_frame(g.design.schedule.frame_phase) * g.design.ideal;
  g.ip_phase = wrap_angle(s.zeta + g.design.schedule.frame_phase / 2.0);
  return g;
}

inline QOperator cp_logical_block(const CpGate& g, const CpSettings& s) {
  const PairSpace ps = pair_space(s.device);
  const ParametricHamiltonian h = cp_pair_hamiltonian(s.device, g.design.schedule.settings, s.drift2);
  return block(propagate_schedule(h, s.phase_step), ps.logical);
}

/// Fits the local-Z frame on `m` and records the closed fidelity.
inline void finalize_cp_gate(CpGate& g, const QOperator& m) {
  const QOperator base = cp_frame(g.design.schedule.frame_phase) * g.design.ideal;
  g.local_z = fit_local_z(base, m);
  g.target = g.local_z.matrix() * base;
  g.closed_fidelity = closed_average_two(g.target, m);
}

/// Calibrates the sideband offset, start time and local-Z frame at zero drift.
inline CpGate calibrate_cp_gate(const CpSettings& s) {
  CpSettings probe = s;
  probe.drift1 = probe.drift2 = 0.0;
  auto score = [&](double t, double off) {
    CpGate g = build_cp_gate(probe, {t, off});
    finalize_cp_gate(g, cp_logical_block(g, probe));
    return g.closed_fidelity;
  };
  const double period = kTwoPi / std::abs(channel_reference(Channel::kPair, s.device));
  CpGate g = build_cp_gate(s, calibrate_schedule(s.calibration, period, score));
  finalize_cp_gate(g, cp_logical_block(g, probe));
  return g;
}

// ---------------------------------------------------------------------------
// Bare dynamical baselines.

struct DragSettings {
  DeviceParams device{};
  double omega_m = 0.0;  // peak amplitude; 0 selects the encoded gate's Omega_L at beta
  double beta = 2.1;
  double drift1 = 0.0;
  double epsilon = 0.0;
  bool use_drag = true;
  int levels = 3;
  double phase_step = 0.02;
};

inline double drag_peak(const DragSettings& s) {
  return s.omega_m > 0.0 ? s.omega_m : effective_amplitude(Channel::kSingle, s.device, s.beta);
}

/// Drive Hamiltonian of a single anharmonic transmon in the frame of its
/// nominal 0-1 transition: 1/2 (Omega_c e^{i d t} sum sqrt(j+1)|j+1><j| + h.c.)
/// - alpha |2><2| - Bz n, with Omega_c = Bx + i By.
inline QOperator transmon_drive_hamiltonian(int levels, double alpha, double bx, double by, double bz, double drift,
                                            double t) {
  QOperator h = QOperator::Zero(levels, levels);
  const cplx oc = cplx(bx, by) * std::exp(kI * (drift * t));
  for (int j = 0; j + 1 < levels; ++j) {
    const double w = std::sqrt(j + 1.0);
    h(j + 1, j) += 0.5 * w * oc;
    h(j, j + 1) += 0.5 * w * std::conj(oc);
  }
  for (int j = 2; j < levels; ++j) h(j, j) += -alpha * (j * (j - 1) / 2.0);
  for (int j = 1; j < levels; ++j) h(j, j) += -bz * j;
  return h;
}

struct TransmonProgram {
  std::vector<double> starts;
  std::vector<CorrectedField> fields;
  double total_time = 0.0;
};

/// Sine-envelope resonant rotations of the dynamical gate, optionally DRAG corrected.
inline TransmonProgram drag_program(Gate g, const DragSettings& s) {
  if (s.levels < 3) throw InvalidArgument("drag_program: transmon needs at least three levels");
  const double peak = drag_peak(s);
  PulseSequence pulse = dynamical_gate(g, {Envelope::kSine, peak});
  if (s.epsilon != 0.0) pulse = inject_errors(pulse, {s.epsilon, 0.0, 0.0, 0.0});
  TransmonProgram prog;
  double t = 0.0;
  for (const auto& seg : pulse.segments()) {
    prog.starts.push_back(t);
    const ControlField field = ControlField::from_segment(seg);
    prog.fields.push_back(s.use_drag ? drag_correct(field, s.device.alpha1)
                                     : CorrectedField{field, std::numeric_limits<double>::infinity()});
    t += seg.duration;
  }
  prog.total_time = t;
  return prog;
}

inline HamiltonianFn drag_hamiltonian(const TransmonProgram& prog, const DragSettings& s) {
  return [prog, s](double t) {
    std::size_t k = 0;
    while (k + 1 < prog.starts.size() && t >= prog.starts[k + 1]) ++k;
    const double local = t - prog.starts[k];
    const CorrectedField& f = prog.fields[k];
    return transmon_drive_hamiltonian(s.levels, s.device.alpha1, f.bx(local), f.by(local), f.bz(local), s.drift1, t);
  };
}

inline double drag_step(const DragSettings& s) {
  const double scale = std::abs(s.device.alpha1) * (s.levels - 2) + 2.0 * drag_peak(s) + std::abs(s.drift1);
  return s.phase_step / std::max(1.0, scale);
}

struct TransmonGateResult {
  QOperator full;        // levels x levels propagator
  QOperator logical;     // computational block
  double leakage = 0.0;  // population outside {0, 1} averaged over |0>, |1> inputs
  double gate_time = 0.0;
};

/// Closed-system simulation of the dynamical gate on a multi-level transmon.
inline TransmonGateResult single_transmon_drag_model(Gate g, const DragSettings& s) {
  const TransmonProgram prog = drag_program(g, s);
  const HamiltonianFn h = drag_hamiltonian(prog, s);
  QOperator u = identity(s.levels);
  const double dt = drag_step(s);
  for (std::size_t k = 0; k < prog.starts.size(); ++k) {
    const double end = k + 1 < prog.starts.size() ? prog.starts[k + 1] : prog.total_time;
    u = propagate_tdse(h, {prog.starts[k], end, std::min(dt, end - prog.starts[k])}) * u;
  }
  TransmonGateResult r;
  r.full = u;
  r.logical = u.topLeftCorner(2, 2);
  double leak = 0.0;
  for (int j = 0; j < 2; ++j)
    for (int l = 2; l < s.levels; ++l) leak += std::norm(u(l, j));
  r.leakage = leak / 2.0;
  r.gate_time = prog.total_time;
  return r;
}

/// Ideal gate with the virtual Z fitted on the zero-drift closed transmon gate.
inline QOperator transmon_gate_target(Gate g, const DragSettings& s) {
  DragSettings probe = s;
  probe.drift1 = 0.0;
  const QOperator ideal = textbook_gate(g);
  return virtual_z(fit_virtual_z(ideal, single_transmon_drag_model(g, probe).logical)) * ideal;
}

struct DynamicalCpSettings {
  DeviceParams device{};
  double beta = 1.2;
  double zeta = kPi / 2.0;
  double drift1 = 0.0;
  double drift2 = 0.0;
  Calibration calibration{};
  double phase_step = 0.05;
};

/// T1 (factor 0) and T2 (factor 1), both with anharmonicity alpha_2, exchange
/// coupled at g_a2 with detuning Delta_2.
inline TensorBasis transmon_pair_basis(const DeviceParams& p) {
  return TensorBasis({p.levels_transmon, p.levels_transmon});
}

inline std::vector<CouplingTerm> transmon_pair_terms(const DeviceParams& p) {
  return exchange_terms(transmon_pair_basis(p), 0, 1, p.g_a2, p.delta2, p.alpha2, p.alpha2, 1.0, -1.0);
}

struct DynamicalCpGate {
  std::vector<ModulationSettings> schedule;
  double omega_d = 0.0;
  double delta_d = 0.0;
  CalibrationPoint calibration;
  QOperator ideal;   // diag{1, 1, 1, e^{i zeta}}
  QOperator target;  // ideal with the fitted local-Z frame
  LocalZ local_z;
  double closed_fidelity = 0.0;
};

/// Computational states {00, 01, 10, 11} of the transmon pair.
inline std::vector<Eigen::Index> transmon_pair_logical(const DeviceParams& p) {
  const TensorBasis b = transmon_pair_basis(p);
  return {b.index({0, 0}), b.index({0, 1}), b.index({1, 0}), b.index({1, 1})};
}

/// Invariant span {00, 01, 10, 11, 02, 20} of the transmon pair.
inline std::vector<Eigen::Index> transmon_pair_span(const DeviceParams& p) {
  const TensorBasis b = transmon_pair_basis(p);
  return {b.index({0, 0}), b.index({0, 1}), b.index({1, 0}), b.index({1, 1}), b.index({0, 2}), b.index({2, 0})};
}

/// Detuned full-cycle |11> <-> |20> sideband: |11> returns with phase
/// pi (1 - |Delta_d| / sqrt(Delta_d^2 + Omega_d^2)) = zeta, the sign of Delta_d
/// selecting +zeta.
inline DynamicalCpGate dynamical_cp_schedule(const DynamicalCpSettings& s, CalibrationPoint cal) {
  s.device.validate();
  if (!(s.zeta > 0.0 && s.zeta < kTwoPi)) throw InvalidArgument("dynamical_cp_schedule: zeta must lie in (0, 2 pi)");
  DynamicalCpGate g;
  g.omega_d = effective_amplitude(Channel::kPair, s.device, s.beta);
  const double r = 1.0 - s.zeta / kPi;
  g.delta_d = -g.omega_d * r / std::sqrt(std::max(1e-300, 1.0 - r * r));
  const double omega_r = std::hypot(g.omega_d, g.delta_d);
  ModulationSettings m =
      make_modulation(s.device.delta2 - s.device.alpha2, s.beta, 0.0, 0.0, g.delta_d + cal.frequency_offset);
  m.t_start = cal.t_start;
  m.duration = g.omega_d > 0.0 ? kTwoPi / omega_r : 0.0;
  m.phase_offset = s.beta * std::cos(m.nu * cal.t_start + m.phi);
  g.schedule = {m};
  g.calibration = cal;
  g.ideal = identity(4);
  g.ideal(3, 3) = std::exp(kI * s.zeta);
  g.target = g.ideal;
  return g;
}

inline ParametricHamiltonian dynamical_cp_hamiltonian(const DynamicalCpGate& g, const DynamicalCpSettings& s) {
  return ParametricHamiltonian(transmon_pair_basis(s.device).size(), transmon_pair_terms(s.device), g.schedule, s.drift1,
                               s.drift2);
}

inline QOperator dynamical_cp_block(const DynamicalCpGate& g, const DynamicalCpSettings& s) {
  if (g.schedule.front().duration <= 0.0) return identity(4);
  const ParametricHamiltonian h = dynamical_cp_hamiltonian(g, s).restricted(transmon_pair_span(s.device));
  return block(propagate_schedule(h, s.phase_step), {0, 1, 2, 3});
}

inline void finalize_dynamical_cp(DynamicalCpGate& g, const QOperator& m) {
  g.local_z = fit_local_z(g.ideal, m);
  g.target = g.local_z.matrix() * g.ideal;
  g.closed_fidelity = closed_average_two(g.target, m);
}

/// Same calibration procedure as the geometric gate.
inline DynamicalCpGate dynamical_cp_baseline(const DynamicalCpSettings& s) {
  DynamicalCpSettings probe = s;
  probe.drift1 = probe.drift2 = 0.0;
  auto score = [&](double t, double off) {
    DynamicalCpGate g = dynamical_cp_schedule(probe, {t, off});
    finalize_dynamical_cp(g, dynamical_cp_block(g, probe));
    return g.closed_fidelity;
  };
  const double period = kTwoPi / std::abs(s.device.delta2 - s.device.alpha2);
  DynamicalCpGate g = dynamical_cp_schedule(s, calibrate_schedule(s.calibration, period, score));
  finalize_dynamical_cp(g, dynamical_cp_block(g, probe));
  return g;
}

}  // namespace geogate
