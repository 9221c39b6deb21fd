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

#include <cmath>

#include "geogate/error.hpp"

namespace geogate {

/// Location and value of the first maximum of J1.
inline constexpr double kBesselJ1ArgMax = 1.8411837813406593;
inline constexpr double kBesselJ1Max = 0.5818652242815964;

/// Bessel function of the first kind, order one. Power series for |x| <= 8,
/// the standard library's cylindrical Bessel beyond.
inline double bessel_j1(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("bessel_j1: argument must be finite");
  const double ax = std::abs(x);
  double value = 0.0;
  if (ax <= 8.0) {
    const double h = 0.5 * ax;
    const double h2 = h * h;
    double term = h;
    for (int k = 0; k < 60; ++k) {
      value += term;
      term *= -h2 / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
      if (std::abs(term) < 1e-18) break;
    }
  } else {
    value = std::cyl_bessel_j(1.0, ax);
  }
  return x < 0.0 ? -value : value;
}

/// Smallest beta >= 0 with J1(beta) = target, on the rising branch [0, 1.8412].
inline double bessel_j1_rising_inverse(double target) {
  if (!(target >= 0.0) || target > kBesselJ1Max) {
    throw UnreachableAmplitude("requested coupling exceeds the maximum of J1");
  }
  double lo = 0.0, hi = kBesselJ1ArgMax;
  for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j1(mid) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace geogate
