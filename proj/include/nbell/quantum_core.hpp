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

// Spin-path entangled single-neutron states and joint projective measurements.
//
// The Hilbert space is path ⊗ spin with the fixed basis ordering
//   (|I,↑⟩, |I,↓⟩, |II,↑⟩, |II,↓⟩).
// Path directions are conventionally called α (alpha), spin directions β (beta).
// A direction (polar, azimuthal) selects the ket
//   |+dir⟩ = cos(polar/2)|e0⟩ + e^{i·azimuthal} sin(polar/2)|e1⟩
// and |−dir⟩ is its orthogonal complement.

#include <Eigen/Core>

#include <complex>

namespace nbell {

using Complex = std::complex<double>;
using Amplitudes = Eigen::Vector4cd;
using Operator2 = Eigen::Matrix2cd;

enum class Subspace { path, spin };
enum class Outcome { plus, minus };

inline constexpr int sign_of(Outcome o) { return o == Outcome::plus ? 1 : -1; }

class PureState {
 public:
  PureState(const Amplitudes& amplitudes, double gamma, double theta, double path_phase,
            double dyn_offset);

  const Amplitudes& amplitudes() const { return amplitudes_; }
  Complex amplitude(int path, int spin) const { return amplitudes_(2 * path + spin); }
  double gamma() const { return gamma_; }
  double theta() const { return theta_; }
  double path_phase() const { return path_phase_; }
  double dyn_offset() const { return dyn_offset_; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }

 private:
  Amplitudes amplitudes_;
  double gamma_;
  double theta_;
  double path_phase_;
  double dyn_offset_;
};

class MeasurementDirection {
 public:
  MeasurementDirection(Subspace subspace, double polar, double azimuthal = 0.0);

  static MeasurementDirection path(double polar, double azimuthal = 0.0) {
    return {Subspace::path, polar, azimuthal};
  }
  static MeasurementDirection spin(double polar, double azimuthal = 0.0) {
    return {Subspace::spin, polar, azimuthal};
  }

  double polar() const { return polar_; }          // in [0, 2π)
  double azimuthal() const { return azimuthal_; }  // in [0, 2π)
  Subspace subspace() const { return subspace_; }

  // polar ↦ polar + π; the projector onto |+antipode⟩ equals the one onto |−dir⟩.
  MeasurementDirection antipode() const;

  Eigen::Vector2cd ket(Outcome outcome) const;

 private:
  Subspace subspace_;
  double polar_;
  double azimuthal_;
};

struct JointSetting {
  MeasurementDirection path_dir;
  MeasurementDirection spin_dir;
  Outcome path_sign = Outcome::plus;
  Outcome spin_sign = Outcome::plus;
};

/// Spin-path Bell state with geometric phase `gamma`, flip imperfection `theta`
/// and path phase χ = `path_phase` applied to |II⟩:
///   (1/√2)(|I,↑⟩ + e^{i(χ+γ)} |II⟩ ⊗ (sin(θ/2)|↑⟩ + cos(θ/2)|↓⟩)).
/// `dyn_offset` is a constant dynamical phase added to χ.
PureState bell_state(double gamma, double theta = 0.0, double path_phase = 0.0,
                     double dyn_offset = 0.0);

/// Flipper-off reference state: both paths carry |↑⟩, (1/√2)(|I⟩ + e^{i(χ+offset)}|II⟩)⊗|↑⟩.
PureState reference_state(double path_phase, double dyn_offset = 0.0);

Operator2 subspace_projector(const MeasurementDirection& dir, Outcome sign);

double joint_probability(const PureState& state, const JointSetting& setting);

/// ⟨Ψ| A(α) ⊗ B(β) |Ψ⟩ with A = P₊ − P₋, assembled from the four joint probabilities.
double expectation(const PureState& state, const MeasurementDirection& path_dir,
                   const MeasurementDirection& spin_dir);

}  // namespace nbell
