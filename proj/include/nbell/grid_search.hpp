// Copyright 2026 The nbell Authors
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

// Maximization of a smooth objective on an N-torus: exhaustive coarse grid followed by
// compass-pattern refinement with step halving.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "nbell/angles.hpp"

namespace nbell {

template <std::size_t N>
using Point = std::array<double, N>;

template <std::size_t N>
struct GridOptimum {
  Point<N> x{};
  double value = 0.0;
  std::size_t evaluations = 0;
};

template <std::size_t N>
struct TorusDomain {
  Point<N> lower{};  // each coordinate lives in [lower, lower + period)
  double period = kTwoPi;

  double wrap(std::size_t, double v, double lo) const {
    double r = std::fmod(v - lo, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return lo + r;
  }
  Point<N> wrap(const Point<N>& p) const {
    Point<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = wrap(i, p[i], lower[i]);
    return out;
  }
};

/// Coarse scan of the lattice lower + k·step (ascending, last coordinate fastest), keeping
/// the first strict maximum so ties resolve to the lexicographically smallest point; then
/// compass search over all 3^N − 1 neighbours until the step drops below `refine_tol`.
template <std::size_t N, class F>
GridOptimum<N> maximize_on_torus(F&& objective, const TorusDomain<N>& domain, double coarse_step,
                                 double refine_tol) {
  static_assert(N >= 1 && N <= 4);
  if (!(coarse_step > 0.0) || !(refine_tol > 0.0)) {
    throw std::invalid_argument("maximize_on_torus: steps must be positive");
  }
  const auto per_axis = static_cast<std::size_t>(std::ceil(domain.period / coarse_step - 1e-9));

  GridOptimum<N> best;
  best.value = -std::numeric_limits<double>::infinity();
  std::array<std::size_t, N> idx{};
  for (bool more = true; more;) {
    Point<N> p;
    for (std::size_t i = 0; i < N; ++i) {
      p[i] = domain.lower[i] + static_cast<double>(idx[i]) * coarse_step;
    }
    const double v = objective(p);
    ++best.evaluations;
    if (v > best.value) {
      best.value = v;
      best.x = p;
    }
    more = false;
    for (std::size_t d = N; d-- > 0;) {
      if (++idx[d] < per_axis) {
        more = true;
        break;
      }
      idx[d] = 0;
    }
  }

  double h = coarse_step;
  std::size_t neighbours = 1;
  for (std::size_t i = 0; i < N; ++i) neighbours *= 3;
  while (h >= refine_tol) {
    Point<N> next = best.x;
    double next_value = best.value;
    for (std::size_t code = 0; code < neighbours; ++code) {
      std::size_t c = code;
      bool centre = true;
      Point<N> p = best.x;
      for (std::size_t i = 0; i < N; ++i) {
        const int offset = static_cast<int>(c % 3) - 1;
        c /= 3;
        if (offset != 0) centre = false;
        p[i] += offset * h;
      }
      if (centre) continue;
      p = domain.wrap(p);
      const double v = objective(p);
      ++best.evaluations;
      if (v > next_value) {
        next_value = v;
        next = p;
      }
    }
    if (next_value > best.value) {
      best.x = next;
      best.value = next_value;
    } else {
      h *= 0.5;
    }
  }
  return best;
}

}  // namespace nbell
