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

#include "nbell/quantum_core.hpp"

#include <cmath>
#include <stdexcept>

#include "nbell/angles.hpp"

namespace nbell {

PureState::PureState(const Amplitudes& amplitudes, double gamma, double theta, double path_phase,
                     double dyn_offset)
    : amplitudes_(amplitudes),
      gamma_(gamma),
      theta_(theta),
      path_phase_(path_phase),
      dyn_offset_(dyn_offset) {
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-12) {
    throw std::invalid_argument("PureState: amplitudes are not normalized");
  }
}

MeasurementDirection::MeasurementDirection(Subspace subspace, double polar, double azimuthal)
    : subspace_(subspace), polar_(wrap_two_pi(polar)), azimuthal_(wrap_two_pi(azimuthal)) {}

MeasurementDirection MeasurementDirection::antipode() const {
  return {subspace_, polar_ + kPi, azimuthal_};
}

Eigen::Vector2cd MeasurementDirection::ket(Outcome outcome) const {
  const double c = std::cos(0.5 * polar_);
  const double s = std::sin(0.5 * polar_);
  const Complex phase = std::polar(1.0, azimuthal_);
  Eigen::Vector2cd v;
  if (outcome == Outcome::plus) {
    v << c, phase * s;
  } else {
    v << -s, phase * c;
  }
  return v;
}

PureState bell_state(double gamma, double theta, double path_phase, double dyn_offset) {
  const double r = 1.0 / kSqrt2;
  const Complex branch = std::polar(r, path_phase + dyn_offset + gamma);
  Amplitudes a;
  a << r, 0.0, branch * std::sin(0.5 * theta), branch * std::cos(0.5 * theta);
  return {a, gamma, theta, path_phase, dyn_offset};
}

PureState reference_state(double path_phase, double dyn_offset) {
  const double r = 1.0 / kSqrt2;
  Amplitudes a;
  a << r, 0.0, std::polar(r, path_phase + dyn_offset), 0.0;
  return {a, 0.0, 0.0, path_phase, dyn_offset};
}

Operator2 subspace_projector(const MeasurementDirection& dir, Outcome sign) {
  const Eigen::Vector2cd k = dir.ket(sign);
  return k * k.adjoint();
}

double joint_probability(const PureState& state, const JointSetting& setting) {
  const Operator2 p = subspace_projector(setting.path_dir, setting.path_sign);
  const Operator2 q = subspace_projector(setting.spin_dir, setting.spin_sign);
  // Amplitudes reshaped to M(path, spin); ⟨Ψ|P⊗Q|Ψ⟩ = Σ conj(M) ∘ (P M Qᵀ).
  Eigen::Matrix2cd m;
  m << state.amplitude(0, 0), state.amplitude(0, 1), state.amplitude(1, 0), state.amplitude(1, 1);
  const Eigen::Matrix2cd pmq = p * m * q.transpose();
  return m.conjugate().cwiseProduct(pmq).sum().real();
}

double expectation(const PureState& state, const MeasurementDirection& path_dir,
                   const MeasurementDirection& spin_dir) {
  double e = 0.0;
  for (Outcome a : {Outcome::plus, Outcome::minus}) {
    for (Outcome b : {Outcome::plus, Outcome::minus}) {
      e += sign_of(a) * sign_of(b) * joint_probability(state, {path_dir, spin_dir, a, b});
    }
  }
  return e;
}

}  // namespace nbell
