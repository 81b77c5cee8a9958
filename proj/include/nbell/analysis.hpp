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

// Estimation pipeline: from simulated count data to correlation functions, S-surfaces and
// adjusted Bell angles for the polar and azimuthal compensation schemes.
//
// Every measured curve (counts versus δ, or χ-fit coefficients versus δ) is a first
// harmonic of its angle, so each correlation E(angle) is represented by a CorrelationModel:
// a "sum" harmonic p and a "difference" harmonic q with E(t) = (q₁ cos t + q₂ sin t)/p₀.

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <vector>

#include "nbell/chsh.hpp"
#include "nbell/experiment.hpp"
#include "nbell/sinusoid_fit.hpp"

namespace nbell {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

struct CorrelationModel {
  Vector6 params = Vector6::Zero();  // (p₀, p₁, p₂, q₀, q₁, q₂)
  Matrix6 covariance = Matrix6::Zero();

  double expectation(double t) const;
  Vector6 gradient(double t) const;
  double sigma(double t) const;
};

/// Plus/minus curves of one setting family fitted independently: p = θ₊ + θ₋, q = θ₊ − θ₋.
CorrelationModel correlation_from_fits(const SinusoidFit& plus, const SinusoidFit& minus);

/// Joint generalized least-squares fit of the per-δ χ-fit coefficients (a, b), with their 2×2
/// covariances, as harmonics of δ: p fits a(δ), q fits b(δ).
CorrelationModel correlation_from_coefficients(std::span<const double> delta,
                                               std::span<const Eigen::Vector2d> ab,
                                               std::span<const Eigen::Matrix2d> ab_cov);

struct ScanOptions {
  std::vector<double> chi_grid = default_chi_grid();
  bool exact = false;  // use expected counts instead of Poisson draws
  // Reference (flipper-off) calibration of the χ-scans; the reference is recorded once per
  // γ at spin analysis angle `reference_delta`.
  ReferenceMode reference{.contrast = false, .phase = true};
  double reference_delta = 0.0;
  double coarse_step = kDefaultCoarseStep;
  double refine_tol = kDefaultRefineTol;
};

/// Data of one polar-adjustment run at fixed γ: beam-block (±ẑ) and χ-scan (±x̂) models.
struct PolarMeasurement {
  double gamma = 0.0;
  std::vector<double> deltas;  // analysis angles actually measured
  CorrelationModel z;          // E(α, β) for α = (0, 0)
  CorrelationModel x;          // E(α′, β) for α′ = (π/2, 0)

  double s(double beta1, double beta1_p) const;
  double sigma_s(double beta1, double beta1_p) const;
  /// 1σ uncertainty of the surface-maximizing β₁.
  double sigma_beta1() const;
};

/// Records beam-block and χ-scan data on δ_grid ∪ (δ_grid + π) and builds the models.
/// delta_grid must cover [0, π] with spacing ≤ π/8 (ConfigError otherwise).
PolarMeasurement measure_polar(const ExperimentConfig& config, double gamma,
                               std::span<const double> delta_grid, const ScanOptions& options = {});

/// Data of one azimuthal-adjustment run at fixed γ with β = π/4, β′ = 3π/4.
struct AzimuthalMeasurement {
  double gamma = 0.0;
  Estimate z_beta;        // E(α, β) from beam-block counts
  Estimate z_beta_p;      // E(α, β′)
  CorrelationModel x_beta;    // E(α′(α₂′), β) evaluated at t = −α₂′
  CorrelationModel x_beta_p;  // E(α′(α₂′), β′)

  double s(double alpha2_p) const;
  double sigma_s(double alpha2_p) const;
  double sigma_alpha2_p() const;
};

AzimuthalMeasurement measure_azimuthal(const ExperimentConfig& config, double gamma,
                                       const ScanOptions& options = {});

enum class ScanMethod { polar_adjusted, azimuthal_adjusted, unadjusted };
std::string_view to_string(ScanMethod m);

struct ScanResult {
  double gamma = 0.0;
  std::optional<double> beta1;
  std::optional<double> beta1_p;
  std::optional<double> alpha2_p;
  double s = 0.0;
  double sigma_s = 0.0;
  double sigma_angle = 0.0;  // of beta1 (polar) or alpha2_p (azimuthal)
  ScanMethod method = ScanMethod::polar_adjusted;
};

ScanResult analyze_polar(const PolarMeasurement& m, const ScanOptions& options = {});

/// Adjusted result (S maximized over α₂′) followed by the unadjusted one (α₂′ = 0).
std::vector<ScanResult> analyze_azimuthal(const AzimuthalMeasurement& m,
                                          const ScanOptions& options = {});

/// One polar-adjusted ScanResult per γ, ordered as gamma_list.
std::vector<ScanResult> run_polar_scan(const ExperimentConfig& config,
                                       std::span<const double> gamma_list,
                                       std::span<const double> delta_grid,
                                       const ScanOptions& options = {});

/// For every γ: the azimuthal-adjusted result, then the unadjusted one.
std::vector<ScanResult> run_azimuthal_scan(const ExperimentConfig& config,
                                           std::span<const double> gamma_list,
                                           const ScanOptions& options = {});

/// γ = 0, π/6, …, π followed by 5π/4, 3π/2, 7π/4, 2π.
std::vector<double> default_gamma_list();

}  // namespace nbell
