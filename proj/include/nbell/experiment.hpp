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

// Counting-experiment simulator for the spin-path interferometer.
//
// Rates are 2·R·p where p is a joint probability (the largest joint probability of the
// Bell state is 1/2, so R is the peak detection rate). Finite contrast V is a convex blend
// of p toward the average over the scanned variable: the path phase χ for interferograms,
// the spin-analysis angle δ for beam-block runs. V = 1 is the ideal quantum prediction.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nbell/rng.hpp"

namespace nbell {

struct ExperimentConfig {
  double max_rate = 25.0;      // counts/s
  double measure_time = 40.0;  // s per point
  double visibility = 1.0;     // fringe contrast in [0, 1]
  double theta = 0.0;          // rad, flip imperfection
  double dyn_offset = 0.0;     // rad, constant dynamical phase
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

enum class PathBranch { I, II };

struct Interferogram {
  std::vector<double> chi_values;
  std::vector<std::int64_t> counts;
  double delta = 0.0;
  double gamma = 0.0;
  bool flipper_on = true;
};

/// Counts versus spin-analysis angle δ with one path blocked.
struct BeamBlockScan {
  std::vector<double> delta_values;
  std::vector<std::int64_t> counts;
  double gamma = 0.0;
  PathBranch blocked_path = PathBranch::II;
};

struct CountQuadruple {
  std::int64_t n_pp = 0;
  std::int64_t n_pm = 0;
  std::int64_t n_mp = 0;
  std::int64_t n_mm = 0;

  std::int64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
};

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

/// `points` equally spaced path phases covering `periods` full periods from χ = 0.
std::vector<double> default_chi_grid(std::size_t points = 32, double periods = 2.0);

/// δ = 0, π/8, …, π.
std::vector<double> default_delta_grid();

/// Flipper-on O-beam rate for path projection (π/2, 0)+ and spin analysis (δ, 0)+.
double detection_rate(const ExperimentConfig& config, double chi, double delta, double gamma);

/// Flipper-off rate: both paths carry |↑⟩, no geometric phase.
double reference_rate(const ExperimentConfig& config, double chi, double delta);

/// Rate with `blocked_path` stopped; the surviving path is projected onto its own basis ket.
double beam_block_rate(const ExperimentConfig& config, double delta, double gamma,
                       PathBranch blocked_path);

/// Expected counts (rate × measure_time) at the four sign combinations
/// (++, +−, −+, −−) of path (π/2, 0) at phase χ and spin (δ, 0).
std::array<double, 4> interferometer_quadruple(const ExperimentConfig& config, double chi,
                                               double delta, double gamma);

/// Expected beam-block counts at (++, +−, −+, −−) for path (0, 0) and spin (δ, 0).
std::array<double, 4> beam_block_quadruple(const ExperimentConfig& config, double delta,
                                           double gamma);

std::vector<double> expected_interferogram(const ExperimentConfig& config, double delta,
                                           double gamma, std::span<const double> chi_grid,
                                           bool flipper_on = true);

std::vector<double> expected_beam_block(const ExperimentConfig& config,
                                        std::span<const double> delta_grid, double gamma,
                                        PathBranch blocked_path);

std::int64_t sample_poisson(double mean, Rng& rng);

Interferogram simulate_interferogram(const ExperimentConfig& config, double delta, double gamma,
                                     std::span<const double> chi_grid, Rng& rng);

Interferogram reference_run(const ExperimentConfig& config, double delta,
                            std::span<const double> chi_grid, Rng& rng);

BeamBlockScan simulate_beam_block(const ExperimentConfig& config,
                                  std::span<const double> delta_grid, double gamma,
                                  PathBranch blocked_path, Rng& rng);

/// (N₊₊ − N₊₋ − N₋₊ + N₋₋)/(N₊₊ + N₊₋ + N₋₊ + N₋₋) with Poisson error propagation.
/// Throws EstimationError when the total is zero.
Estimate counts_to_expectation(const CountQuadruple& q);

/// Same estimator on real-valued (e.g. expected) counts ordered (++, +−, −+, −−).
Estimate counts_to_expectation(const std::array<double, 4>& n);

/// S = |e₁ − e₂ + e₃ + e₄|, σ_S = sqrt(Σ σᵢ²). Throws std::domain_error if any |eᵢ| > 1.
Estimate s_from_expectations(const std::array<double, 4>& e, const std::array<double, 4>& sigma);

}  // namespace nbell
