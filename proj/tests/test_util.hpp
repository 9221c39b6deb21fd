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

#include <random>

#include "geogate/core.hpp"

namespace testutil {

using geogate::QOperator;

inline QOperator random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  QOperator m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = geogate::cplx(nd(rng), nd(rng));
  return m;
}

inline QOperator random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const QOperator m = random_matrix(n, rng);
  return 0.5 * (m + m.adjoint());
}

inline QOperator random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<QOperator> qr(random_matrix(n, rng));
  return qr.householderQ();
}

/// exp(-i H dt) via eigendecomposition, an oracle independent of the Taylor path.
inline QOperator expm_eig(const QOperator& h, double dt) {
  Eigen::SelfAdjointEigenSolver<QOperator> es(h);
  Eigen::VectorXcd ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) ph(k) = std::exp(-geogate::kI * (es.eigenvalues()(k) * dt));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace testutil
