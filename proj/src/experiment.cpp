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

#include "nbell/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "nbell/angles.hpp"
#include "nbell/errors.hpp"
#include "nbell/quantum_core.hpp"

namespace nbell {

void ExperimentConfig::validate() const {
  if (!(max_rate > 0.0) || !std::isfinite(max_rate)) {
    throw ConfigError("max_rate", "must be a positive finite rate");
  }
  if (!(measure_time > 0.0) || !std::isfinite(measure_time)) {
    throw ConfigError("measure_time", "must be a positive finite time");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw ConfigError("visibility", "must lie in [0, 1]");
  }
  if (!std::isfinite(theta)) throw ConfigError("theta", "must be finite");
  if (!std::isfinite(dyn_offset)) throw ConfigError("dyn_offset", "must be finite");
}

std::vector<double> default_chi_grid(std::size_t points, double periods) {
  std::vector<double> grid(points);
  const double step = periods * kTwoPi / static_cast<double>(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = step * static_cast<double>(i);
  return grid;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid(9);
  for (int i = 0; i <= 8; ++i) grid[i] = i * kPi / 8.0;
  return grid;
}

namespace {

const MeasurementDirection kPathX = MeasurementDirection::path(kPi / 2.0);
const MeasurementDirection kPathZ = MeasurementDirection::path(0.0);

PureState o_beam_state(const ExperimentConfig& c, double chi, double gamma, bool flipper_on) {
  return flipper_on ? bell_state(gamma, c.theta, chi, c.dyn_offset)
                    : reference_state(chi, c.dyn_offset);
}

double blend(double p, double mean, double visibility) { return mean + visibility * (p - mean); }

// Joint probability of a path-x setting, blended toward its χ-average. Every such
// probability is a first harmonic in χ, so the average of χ and χ + π is exact.
double interferometer_probability(const ExperimentConfig& c, double chi, double delta,
                                  double gamma, bool flipper_on, Outcome path_sign,
                                  Outcome spin_sign) {
  const JointSetting setting{kPathX, MeasurementDirection::spin(delta), path_sign, spin_sign};
  const double p = joint_probability(o_beam_state(c, chi, gamma, flipper_on), setting);
  const double p_shift = joint_probability(o_beam_state(c, chi + kPi, gamma, flipper_on), setting);
  return blend(p, 0.5 * (p + p_shift), c.visibility);
}

// Beam-block probability, blended toward its δ-average (first harmonic in δ as well).
double beam_block_probability(const ExperimentConfig& c, double delta, double /*gamma*/,
                              PathBranch blocked_path) {
  const Outcome path_sign = blocked_path == PathBranch::II ? Outcome::plus : Outcome::minus;
  // A single open path has no interference term, so γ and χ drop out exactly.
  const PureState psi = bell_state(0.0, c.theta);
  const double p =
      joint_probability(psi, {kPathZ, MeasurementDirection::spin(delta), path_sign, Outcome::plus});
  const double p_anti = joint_probability(
      psi, {kPathZ, MeasurementDirection::spin(delta + kPi), path_sign, Outcome::plus});
  return blend(p, 0.5 * (p + p_anti), c.visibility);
}

}  // namespace

double detection_rate(const ExperimentConfig& config, double chi, double delta, double gamma) {
  return 2.0 * config.max_rate *
         interferometer_probability(config, chi, delta, gamma, true, Outcome::plus, Outcome::plus);
}

double reference_rate(const ExperimentConfig& config, double chi, double delta) {
  return 2.0 * config.max_rate *
         interferometer_probability(config, chi, delta, 0.0, false, Outcome::plus, Outcome::plus);
}

double beam_block_rate(const ExperimentConfig& config, double delta, double gamma,
                       PathBranch blocked_path) {
  return 2.0 * config.max_rate * beam_block_probability(config, delta, gamma, blocked_path);
}

std::array<double, 4> interferometer_quadruple(const ExperimentConfig& config, double chi,
                                               double delta, double gamma) {
  const double scale = 2.0 * config.max_rate * config.measure_time;
  std::array<double, 4> out{};
  int i = 0;
  for (Outcome a : {Outcome::plus, Outcome::minus}) {
    for (Outcome b : {Outcome::plus, Outcome::minus}) {
      out[i++] = scale * interferometer_probability(config, chi, delta, gamma, true, a, b);
    }
  }
  return out;
}

std::array<double, 4> beam_block_quadruple(const ExperimentConfig& config, double delta,
                                           double gamma) {
  const double scale = 2.0 * config.max_rate * config.measure_time;
  return {scale * beam_block_probability(config, delta, gamma, PathBranch::II),
          scale * beam_block_probability(config, delta + kPi, gamma, PathBranch::II),
          scale * beam_block_probability(config, delta, gamma, PathBranch::I),
          scale * beam_block_probability(config, delta + kPi, gamma, PathBranch::I)};
}

std::vector<double> expected_interferogram(const ExperimentConfig& config, double delta,
                                           double gamma, std::span<const double> chi_grid,
                                           bool flipper_on) {
  std::vector<double> out;
  out.reserve(chi_grid.size());
  for (double chi : chi_grid) {
    const double rate = flipper_on ? detection_rate(config, chi, delta, gamma)
                                   : reference_rate(config, chi, delta);
    out.push_back(rate * config.measure_time);
  }
  return out;
}

std::vector<double> expected_beam_block(const ExperimentConfig& config,
                                        std::span<const double> delta_grid, double gamma,
                                        PathBranch blocked_path) {
  std::vector<double> out;
  out.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    out.push_back(beam_block_rate(config, delta, gamma, blocked_path) * config.measure_time);
  }
  return out;
}

std::int64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

namespace {

std::vector<std::int64_t> draw(const std::vector<double>& means, Rng& rng) {
  std::vector<std::int64_t> counts;
  counts.reserve(means.size());
  for (double m : means) counts.push_back(sample_poisson(m, rng));
  return counts;
}

}  // namespace

Interferogram simulate_interferogram(const ExperimentConfig& config, double delta, double gamma,
                                     std::span<const double> chi_grid, Rng& rng) {
  if (chi_grid.empty()) throw std::invalid_argument("simulate_interferogram: empty chi grid");
  Interferogram g;
  g.chi_values.assign(chi_grid.begin(), chi_grid.end());
  g.counts = draw(expected_interferogram(config, delta, gamma, chi_grid, true), rng);
  g.delta = delta;
  g.gamma = gamma;
  g.flipper_on = true;
  return g;
}

Interferogram reference_run(const ExperimentConfig& config, double delta,
                            std::span<const double> chi_grid, Rng& rng) {
  if (chi_grid.empty()) throw std::invalid_argument("reference_run: empty chi grid");
  Interferogram g;
  g.chi_values.assign(chi_grid.begin(), chi_grid.end());
  g.counts = draw(expected_interferogram(config, delta, 0.0, chi_grid, false), rng);
  g.delta = delta;
  g.gamma = 0.0;
  g.flipper_on = false;
  return g;
}

BeamBlockScan simulate_beam_block(const ExperimentConfig& config,
                                  std::span<const double> delta_grid, double gamma,
                                  PathBranch blocked_path, Rng& rng) {
  if (delta_grid.empty()) throw std::invalid_argument("simulate_beam_block: empty delta grid");
  BeamBlockScan s;
  s.delta_values.assign(delta_grid.begin(), delta_grid.end());
  s.counts = draw(expected_beam_block(config, delta_grid, gamma, blocked_path), rng);
  s.gamma = gamma;
  s.blocked_path = blocked_path;
  return s;
}

Estimate counts_to_expectation(const CountQuadruple& q) {
  if (q.n_pp < 0 || q.n_pm < 0 || q.n_mp < 0 || q.n_mm < 0) {
    throw EstimationError("counts_to_expectation: negative count");
  }
  return counts_to_expectation(std::array<double, 4>{
      static_cast<double>(q.n_pp), static_cast<double>(q.n_pm), static_cast<double>(q.n_mp),
      static_cast<double>(q.n_mm)});
}

Estimate counts_to_expectation(const std::array<double, 4>& n) {
  for (double v : n) {
    if (!(v >= 0.0)) throw EstimationError("counts_to_expectation: negative count");
  }
  const double same = n[0] + n[3];
  const double diff = n[1] + n[2];
  const double total = same + diff;
  if (total <= 0.0) throw EstimationError("counts_to_expectation: zero total counts");
  // ∂E/∂N = (±1 − E)/T with Var N = N gives Var E = 4·same·diff/T³.
  return {(same - diff) / total, 2.0 * std::sqrt(same * diff / (total * total * total))};
}

Estimate s_from_expectations(const std::array<double, 4>& e, const std::array<double, 4>& sigma) {
  double var = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (!(std::abs(e[i]) <= 1.0 + 1e-12)) {
      throw std::domain_error("s_from_expectations: expectation value outside [-1, 1]");
    }
    var += sigma[i] * sigma[i];
  }
  return {std::abs(e[0] - e[1] + e[2] + e[3]), std::sqrt(var)};
}

}  // namespace nbell
