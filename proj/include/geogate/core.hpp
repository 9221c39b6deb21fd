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
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "geogate/error.hpp"

namespace geogate {

using cplx = std::complex<double>;
using QOperator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Frequencies given as f = omega / 2pi in MHz, converted to rad/us.
inline constexpr double mhz(double f) { return kTwoPi * f; }
inline constexpr double khz(double f) { return kTwoPi * f * 1e-3; }

/// Time-dependent Hamiltonian callback, t in microseconds.
using HamiltonianFn = std::function<QOperator(double)>;

inline QOperator identity(Eigen::Index n) { return QOperator::Identity(n, n); }

inline QOperator pauli_x() {
  QOperator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline QOperator pauli_y() {
  QOperator m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline QOperator pauli_z() {
  QOperator m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// |i><j| in an n-dimensional space.
inline QOperator ket_bra(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  QOperator m = QOperator::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline double max_abs(const QOperator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool all_finite(const QOperator& a) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a.data()[k].real()) || !std::isfinite(a.data()[k].imag())) return false;
  }
  return true;
}

inline bool is_hermitian(const QOperator& a, double tol = 1e-12) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

inline bool is_unitary(const QOperator& a, double tol = 1e-9) {
  return a.rows() == a.cols() && max_abs(a.adjoint() * a - identity(a.rows())) <= tol;
}

inline QOperator kron(const QOperator& a, const QOperator& b) {
  QOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Induced infinity norm; bounds the spectral norm of a Hermitian matrix.
inline double row_sum_norm(const QOperator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

/// exp(A) for a general square matrix by Taylor series with scaling and squaring.
inline QOperator expm(const QOperator& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix is not square");
  if (!all_finite(a)) throw NumericFailure("expm: non-finite entries");
  const Eigen::Index n = a.rows();
  const double norm = row_sum_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const QOperator scaled = a / std::ldexp(1.0, squarings);
  QOperator result = identity(n);
  QOperator term = identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (max_abs(term) < 1e-18 * std::max(1.0, max_abs(result))) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

namespace detail {

/// exp(-i H dt) for Hermitian 2x2 H = a0 I + a . sigma, exact.
inline QOperator expm_hermitian_2x2(const QOperator& h, double dt) {
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double ax = h(1, 0).real();
  const double ay = h(1, 0).imag();
  const double r = std::sqrt(ax * ax + ay * ay + az * az);
  const double c = std::cos(r * dt);
  const double s = r > 0.0 ? std::sin(r * dt) / r : dt;
  const cplx ph = std::exp(-kI * (a0 * dt));
  QOperator u(2, 2);
  u(0, 0) = ph * cplx(c, -s * az);
  u(1, 1) = ph * cplx(c, s * az);
  u(0, 1) = ph * (-kI * s) * cplx(ax, -ay);
  u(1, 0) = ph * (-kI * s) * cplx(ax, ay);
  return u;
}

inline void require_hermitian(const QOperator& h, const char* where) {
  if (h.rows() != h.cols()) throw InvalidArgument(std::string(where) + ": operator is not square");
  if (!all_finite(h)) throw NumericFailure(std::string(where) + ": non-finite Hamiltonian entries");
  if (!is_hermitian(h, 1e-12 * std::max(1.0, max_abs(h)))) {
    throw InvalidArgument(std::string(where) + ": Hamiltonian is not Hermitian");
  }
}

}  // namespace detail

/// exp(-i H dt) for Hermitian H.
inline QOperator matrix_exponential(const QOperator& h, double dt) {
  detail::require_hermitian(h, "matrix_exponential");
  if (h.rows() == 2) return detail::expm_hermitian_2x2(h, dt);
  return expm(QOperator(-kI * dt * h));
}

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  double max_step = 1e-3;

  void validate() const {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 >= t0)) {
      throw InvalidArgument("TimeGrid: require finite t1 >= t0");
    }
    if (!(max_step > 0.0)) throw InvalidArgument("TimeGrid: max_step must be positive");
  }
};

/// Largest rotation angle ||H|| dt allowed in one piecewise-constant step.
inline constexpr double kMaxPhaseStep = 0.05;

/// Time-ordered propagator U(t1, t0) by piecewise-constant midpoint sampling.
/// Each grid cell is subdivided until ||H|| dt <= kMaxPhaseStep.
inline QOperator propagate_tdse(const HamiltonianFn& h_of_t, const TimeGrid& grid) {
  grid.validate();
  const QOperator probe = h_of_t(grid.t0);
  const Eigen::Index n = probe.rows();
  QOperator u = identity(n);
  const double span = grid.t1 - grid.t0;
  if (span == 0.0) return u;
  const auto cells = static_cast<long>(std::ceil(span / grid.max_step - 1e-12));
  const double h = span / static_cast<double>(cells);
  for (long c = 0; c < cells; ++c) {
    const double ta = grid.t0 + h * static_cast<double>(c);
    QOperator hm = h_of_t(ta + 0.5 * h);
    detail::require_hermitian(hm, "propagate_tdse");
    const auto sub = static_cast<long>(std::max(1.0, std::ceil(row_sum_norm(hm) * h / kMaxPhaseStep)));
    if (sub == 1) {
      u = matrix_exponential(hm, h) * u;
      continue;
    }
    const double hs = h / static_cast<double>(sub);
    for (long k = 0; k < sub; ++k) {
      QOperator hk = h_of_t(ta + hs * (static_cast<double>(k) + 0.5));
      detail::require_hermitian(hk, "propagate_tdse");
      u = matrix_exponential(hk, hs) * u;
    }
  }
  return u;
}

struct CheckedPropagation {
  QOperator unitary;
  double error_estimate = 0.0;  // max-entry change under one halving of the grid step
};

/// Propagates twice (max_step and max_step/2) and reports the difference.
inline CheckedPropagation propagate_tdse_checked(const HamiltonianFn& h_of_t, const TimeGrid& grid) {
  TimeGrid fine = grid;
  fine.max_step = 0.5 * grid.max_step;
  const QOperator coarse = propagate_tdse(h_of_t, grid);
  QOperator refined = propagate_tdse(h_of_t, fine);
  const double err = max_abs(refined - coarse);
  return {std::move(refined), err};
}

/// min over theta of ||U - e^{i theta} V||_max.
inline double distance_up_to_global_phase(const QOperator& u, const QOperator& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw InvalidArgument("distance_up_to_global_phase: dimension mismatch");
  }
  const cplx tr = (v.adjoint() * u).trace();
  if (std::abs(tr) > 1e-12) return max_abs(u - (tr / std::abs(tr)) * v);
  double best = std::numeric_limits<double>::infinity();
  const auto samples = static_cast<long>(std::ceil(kTwoPi / 1e-4));
  for (long k = 0; k < samples; ++k) {
    const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
    best = std::min(best, max_abs(u - std::exp(kI * th) * v));
  }
  return best;
}

/// A quantum state held either as a pure vector or as a density matrix.
class QState {
 public:
  static QState pure(Vector v) {
    QState s;
    s.vec_ = std::move(v);
    s.validate();
    return s;
  }
  static QState density(QOperator rho) {
    QState s;
    s.rho_ = std::move(rho);
    s.validate();
    return s;
  }
  /// Builds a density state without validating (solver intermediates).
  static QState density_unchecked(QOperator rho) {
    QState s;
    s.rho_ = std::move(rho);
    return s;
  }

  bool is_pure() const { return vec_.has_value(); }
  Eigen::Index dim() const { return vec_ ? vec_->size() : rho_->rows(); }
  const Vector& vector() const {
    if (!vec_) throw InvalidArgument("QState: not a pure state");
    return *vec_;
  }
  QOperator density_matrix() const {
    if (vec_) return (*vec_) * vec_->adjoint();
    return *rho_;
  }

  double min_eigenvalue() const {
    if (vec_) return 0.0;
    const QOperator herm = 0.5 * (*rho_ + rho_->adjoint());
    Eigen::SelfAdjointEigenSolver<QOperator> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  void validate() const {
    if (vec_) {
      if (std::abs(vec_->norm() - 1.0) > 1e-10) throw InvalidArgument("QState: vector is not normalized");
      return;
    }
    const QOperator& r = *rho_;
    if (r.rows() != r.cols()) throw InvalidArgument("QState: density matrix is not square");
    if (std::abs(r.trace() - cplx(1.0)) > 1e-8) throw InvalidArgument("QState: trace differs from 1");
    if (max_abs(r - r.adjoint()) > 1e-10) throw InvalidArgument("QState: density matrix is not Hermitian");
    if (min_eigenvalue() < -1e-8) throw InvalidArgument("QState: density matrix is not positive");
  }

 private:
  std::optional<Vector> vec_;
  std::optional<QOperator> rho_;
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace geogate
