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

#include "nbell/geometric_phase.hpp"

#include <cmath>
#include <stdexcept>

#include "nbell/angles.hpp"

namespace nbell {

Operator2 flipper_unitary(double phi) {
  const Complex minus_i{0.0, -1.0};
  Operator2 u;
  u << 0.0, minus_i * std::polar(1.0, -phi), minus_i * std::polar(1.0, phi), 0.0;
  return u;
}

double solid_angle(double phi_I, double phi_II) {
  // (−2π, 2π] is the negation of [−2π, 2π).
  return -2.0 * wrap_pi(phi_II - phi_I);
}

double geometric_phase(double phi_I, double phi_II) { return phi_I - phi_II; }

ResonanceFields resonance_parameters(double omega, double tau, const PhysicalConstants& constants) {
  if (!(omega > 0.0)) throw std::domain_error("resonance_parameters: omega must be positive");
  if (!(tau > 0.0)) throw std::domain_error("resonance_parameters: tau must be positive");
  ResonanceFields f;
  f.b0 = constants.hbar * omega / (2.0 * constants.mu_neutron_abs);
  f.b_rf = kPi * constants.hbar / (2.0 * tau * constants.mu_neutron_abs);
  return f;
}

PureState flipper_bell_state(double phi_I, double phi_II) {
  const Eigen::Vector2cd up(1.0, 0.0);
  const Eigen::Vector2cd flipped = flipper_unitary(phi_II) * up;
  // Strip the rotation-operator phase of the reference flip: flipped ∝ |↓⟩.
  const Complex ref_phase = flipped(1) / std::abs(flipped(1));
  const Eigen::Vector2cd down = flipped / ref_phase;
  const Eigen::Vector2cd branch = flipper_unitary(phi_I) * flipper_unitary(phi_II).adjoint() * down;

  const double r = 1.0 / kSqrt2;
  Amplitudes a;
  a << r, 0.0, r * branch(0), r * branch(1);
  return {a, geometric_phase(phi_I, phi_II), 0.0, 0.0, 0.0};
}

}  // namespace nbell
