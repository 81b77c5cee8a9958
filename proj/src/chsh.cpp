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

#include "nbell/chsh.hpp"

#include <cmath>
#include <stdexcept>

#include "nbell/grid_search.hpp"

namespace nbell {

std::string_view to_string(SMethod m) {
  switch (m) {
    case SMethod::analytic:
      return "analytic";
    case SMethod::grid:
      return "grid";
    case SMethod::counts:
      return "counts";
  }
  return "unknown";
}

BellAngleSet standard_bell_angles() { return polar_bell_angles(kPi / 2.0, kPi / 4.0, 3.0 * kPi / 4.0); }

BellAngleSet polar_bell_angles(double alpha1_p, double beta1, double beta1_p) {
  return {MeasurementDirection::path(0.0), MeasurementDirection::path(alpha1_p),
          MeasurementDirection::spin(beta1), MeasurementDirection::spin(beta1_p)};
}

BellAngleSet azimuthal_bell_angles(double alpha2_p, double beta2, double beta2_p) {
  return {MeasurementDirection::path(0.0), MeasurementDirection::path(kPi / 2.0, alpha2_p),
          MeasurementDirection::spin(kPi / 4.0, beta2),
          MeasurementDirection::spin(3.0 * kPi / 4.0, beta2_p)};
}

double s_general(const BellAngleSet& a, double gamma) {
  const PureState psi = bell_state(gamma);
  return std::abs(expectation(psi, a.alpha, a.beta) - expectation(psi, a.alpha, a.beta_p) +
                  expectation(psi, a.alpha_p, a.beta) + expectation(psi, a.alpha_p, a.beta_p));
}

double s_standard_angles(double gamma) { return s_general(standard_bell_angles(), gamma); }

double s_polar(double alpha1_p, double beta1, double beta1_p, double gamma) {
  const double cg = std::cos(gamma);
  return std::abs(-std::sin(alpha1_p) * (cg * std::sin(beta1) + cg * std::sin(beta1_p)) -
                  std::cos(alpha1_p) * (std::cos(beta1) + std::cos(beta1_p)) - std::cos(beta1) +
                  std::cos(beta1_p));
}

PolarAngles polar_optimal_angles(double gamma) {
  const double b = std::atan(std::cos(gamma));
  return {b, kPi - b, kPi / 2.0};
}

double s_polar_max(double gamma) {
  const double c = std::cos(gamma);
  return 2.0 * std::sqrt(1.0 + c * c);
}

double s_azimuthal(double alpha2_p, double beta2, double beta2_p, double gamma) {
  return std::abs(-kSqrt2 - 0.5 * kSqrt2 *
                                (std::cos(alpha2_p - beta2 - gamma) +
                                 std::cos(alpha2_p - beta2_p - gamma)));
}

double azimuthal_optimal_angle(double gamma) {
  double r = std::fmod(gamma, kPi);
  if (r < 0.0) r += kPi;
  return r >= kPi ? 0.0 : r;
}

SurfaceMaximum maximize_s_surface(const std::function<double(double, double)>& surface,
                                  double coarse_step, double refine_tol) {
  const TorusDomain<2> domain{{-kPi, -kPi}, kTwoPi};
  const auto best = maximize_on_torus<2>(
      [&](const Point<2>& p) { return surface(p[0], p[1]); }, domain, coarse_step, refine_tol);
  double b1 = wrap_pi(best.x[0]);
  double b1p = best.x[1];
  if (b1 < -kPi / 2.0 || b1 >= kPi / 2.0) {
    b1 = wrap_pi(b1 + kPi);
    b1p += kPi;
  }
  return {b1, wrap_pi(b1p), best.value};
}

SurfaceMaximum grid_maximize_s(double gamma, double coarse_step, double refine_tol) {
  if (!(coarse_step > 0.0) || coarse_step > kPi / 64.0 + 1e-15) {
    throw std::invalid_argument("grid_maximize_s: coarse_step must be in (0, pi/64]");
  }
  if (!(refine_tol > 0.0) || refine_tol > 1e-6) {
    throw std::invalid_argument("grid_maximize_s: refine_tol must be in (0, 1e-6]");
  }
  return maximize_s_surface(
      [gamma](double b1, double b1p) { return s_polar(kPi / 2.0, b1, b1p, gamma); }, coarse_step,
      refine_tol);
}

}  // namespace nbell
