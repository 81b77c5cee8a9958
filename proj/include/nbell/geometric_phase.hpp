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

// Geometric phase imprinted by two resonant rf spin flippers.
//
// Each flipper performs a π rotation about the in-plane axis (cos φ, sin φ, 0) set by the
// phase φ of its oscillating field. Going |↑⟩ → |↓⟩ with phase φ_I and back with φ_II
// traces two semi-great circles enclosing the solid angle Ω = 2(φ_I − φ_II).

#include <Eigen/Core>

#include "nbell/quantum_core.hpp"

namespace nbell {

struct PhysicalConstants {
  double hbar = 1.054571817e-34;           // J·s, CODATA 2018
  double mu_neutron_abs = 9.6623651e-27;   // J/T, |μ_n|, CODATA 2018
};

struct FlipperSetting {
  double phi = 0.0;            // rad, phase of the oscillating field
  double frequency = 0.0;      // rad/s, ω
  double exposure_time = 0.0;  // s, τ
};

struct ResonanceFields {
  double b0 = 0.0;    // T, static guide field
  double b_rf = 0.0;  // T, oscillating field amplitude for a π flip
};

/// π rotation about (cos φ, sin φ, 0): U(φ) = −i (cos φ σx + sin φ σy).
/// U(0)|↑⟩ = −i|↓⟩; only phase differences between settings are meaningful.
Operator2 flipper_unitary(double phi);

/// Ω = 2(φ_I − φ_II) wrapped to (−2π, 2π].
double solid_angle(double phi_I, double phi_II);

/// Operative geometric phase γ = φ_I − φ_II entering the interferometer state.
double geometric_phase(double phi_I, double phi_II);

/// B₀ = ħω/(2|μ|) and B_rf = πħ/(2τ|μ|). Throws std::domain_error for ω ≤ 0 or τ ≤ 0.
ResonanceFields resonance_parameters(double omega, double tau,
                                     const PhysicalConstants& constants = {});

inline ResonanceFields resonance_parameters(const FlipperSetting& setting,
                                            const PhysicalConstants& constants = {}) {
  return resonance_parameters(setting.frequency, setting.exposure_time, constants);
}

/// Bell state whose path-II spinor is produced by the flipper pair:
/// the reference flip U(φ_II)|↑⟩ ∝ |↓⟩ followed by the loop U(φ_I)U†(φ_II).
/// The constant phase of the reference flip is removed, so the result is comparable with
/// bell_state(geometric_phase(φ_I, φ_II)).
PureState flipper_bell_state(double phi_I, double phi_II);

}  // namespace nbell
