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

// CHSH S-functions for the spin-path Bell state with geometric phase γ, the analytic Bell
// angles that compensate γ, and numerical maximization of the S(β₁, β₁′) surface.

#include <functional>
#include <string_view>

#include "nbell/angles.hpp"
#include "nbell/quantum_core.hpp"

namespace nbell {

struct BellAngleSet {
  MeasurementDirection alpha;    // path
  MeasurementDirection alpha_p;  // path
  MeasurementDirection beta;     // spin
  MeasurementDirection beta_p;   // spin
};

enum class SMethod { analytic, grid, counts };
std::string_view to_string(SMethod m);

struct SValueRecord {
  double gamma = 0.0;
  double s = 0.0;
  BellAngleSet angles;
  SMethod method = SMethod::analytic;
};

/// α = 0, α′ = π/2, β = π/4, β′ = 3π/4, all azimuths zero.
BellAngleSet standard_bell_angles();

/// α = (0,0), α′ = (α₁′,0), β = (β₁,0), β′ = (β₁′,0).
BellAngleSet polar_bell_angles(double alpha1_p, double beta1, double beta1_p);

/// Standard polar angles with α′ = (π/2, α₂′), β = (π/4, β₂), β′ = (3π/4, β₂′).
BellAngleSet azimuthal_bell_angles(double alpha2_p, double beta2, double beta2_p);

/// |E(α,β) − E(α,β′) + E(α′,β) + E(α′,β′)| from projector expectations on bell_state(γ).
double s_general(const BellAngleSet& angles, double gamma);

/// S at the standard Bell angles; equals √2·|1 + cos γ|.
double s_standard_angles(double gamma);

/// Closed form for α₁ = 0 and all azimuthal angles zero.
double s_polar(double alpha1_p, double beta1, double beta1_p, double gamma);

struct PolarAngles {
  double beta1 = 0.0;
  double beta1_p = 0.0;
  double alpha1_p = 0.0;
};

/// β₁ = arctan(cos γ) (principal branch), β₁′ = π − β₁, α₁′ = π/2.
PolarAngles polar_optimal_angles(double gamma);

/// 2·sqrt(1 + cos²γ): s_polar at polar_optimal_angles(γ).
double s_polar_max(double gamma);

/// Closed form at the standard polar angles (α₁ = α₂ = 0) with varied azimuths.
double s_azimuthal(double alpha2_p, double beta2, double beta2_p, double gamma);

/// α₂′ = γ reduced mod π into [0, π), with β₂ = β₂′ = 0.
/// S reaches 2√2 at α₂′ ≡ γ (mod 2π); for γ mod 2π in [π, 2π) the returned
/// representative is the antipodal one, where s_azimuthal vanishes.
double azimuthal_optimal_angle(double gamma);

inline constexpr double kDefaultCoarseStep = kPi / 180.0;
inline constexpr double kDefaultRefineTol = 1e-7;

struct SurfaceMaximum {
  double beta1 = 0.0;
  double beta1_p = 0.0;
  double s = 0.0;
};

/// Maximizes an S(β₁, β₁′) surface over [−π, π)². The surface must be invariant under
/// (β₁, β₁′) ↦ (β₁ + π, β₁′ + π); the returned representative has β₁ ∈ [−π/2, π/2)
/// with β₁′ wrapped into [−π, π).
SurfaceMaximum maximize_s_surface(const std::function<double(double, double)>& surface,
                                  double coarse_step = kDefaultCoarseStep,
                                  double refine_tol = kDefaultRefineTol);

/// maximize_s_surface applied to s_polar(π/2, β₁, β₁′, γ).
/// Requires coarse_step ≤ π/64 and refine_tol ≤ 1e-6 (std::invalid_argument otherwise).
SurfaceMaximum grid_maximize_s(double gamma, double coarse_step = kDefaultCoarseStep,
                               double refine_tol = kDefaultRefineTol);

}  // namespace nbell
