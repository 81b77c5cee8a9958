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

#include "nbell/analysis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>

#include "nbell/angles.hpp"
#include "nbell/errors.hpp"
#include "nbell/grid_search.hpp"

namespace nbell {

double CorrelationModel::expectation(double t) const {
  return (params(4) * std::cos(t) + params(5) * std::sin(t)) / params(0);
}

Vector6 CorrelationModel::gradient(double t) const {
  Vector6 g = Vector6::Zero();
  g(0) = -expectation(t) / params(0);
  g(4) = std::cos(t) / params(0);
  g(5) = std::sin(t) / params(0);
  return g;
}

double CorrelationModel::sigma(double t) const {
  const Vector6 g = gradient(t);
  return std::sqrt(std::max(0.0, g.dot(covariance * g)));
}

CorrelationModel correlation_from_fits(const SinusoidFit& plus, const SinusoidFit& minus) {
  CorrelationModel m;
  m.params.head<3>() = plus.coefficients() + minus.coefficients();
  m.params.tail<3>() = plus.coefficients() - minus.coefficients();
  const Eigen::Matrix3d sum = plus.covariance + minus.covariance;
  const Eigen::Matrix3d diff = plus.covariance - minus.covariance;
  m.covariance << sum, diff, diff, sum;
  if (!(m.params(0) > 0.0)) throw EstimationError("correlation_from_fits: no counts");
  return m;
}

CorrelationModel correlation_from_coefficients(std::span<const double> delta,
                                               std::span<const Eigen::Vector2d> ab,
                                               std::span<const Eigen::Matrix2d> ab_cov) {
  if (delta.size() != ab.size() || delta.size() != ab_cov.size()) {
    throw FitError("correlation_from_coefficients: mismatched input lengths");
  }
  if (delta.size() < 5) throw FitError("correlation_from_coefficients: at least 5 points");

  Matrix6 normal = Matrix6::Zero();
  Vector6 rhs = Vector6::Zero();
  for (std::size_t k = 0; k < delta.size(); ++k) {
    Eigen::Matrix<double, 2, 6> design = Eigen::Matrix<double, 2, 6>::Zero();
    const Eigen::RowVector3d h(1.0, std::cos(delta[k]), std::sin(delta[k]));
    design.block<1, 3>(0, 0) = h;
    design.block<1, 3>(1, 3) = h;
    const Eigen::LDLT<Eigen::Matrix2d> c(ab_cov[k]);
    if (c.info() != Eigen::Success || !c.isPositive()) {
      throw FitError("correlation_from_coefficients: covariance is not positive definite");
    }
    const Eigen::Matrix2d weight = c.solve(Eigen::Matrix2d::Identity());
    normal.noalias() += design.transpose() * weight * design;
    rhs.noalias() += design.transpose() * weight * ab[k];
  }
  const Eigen::SelfAdjointEigenSolver<Matrix6> eig(normal, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues()(0) > 1e-12 * eig.eigenvalues()(5))) {
    throw FitError("correlation_from_coefficients: rank-deficient design");
  }
  const Eigen::LDLT<Matrix6> ldlt(normal);
  CorrelationModel m;
  m.params = ldlt.solve(rhs);
  const Matrix6 cov = ldlt.solve(Matrix6::Identity());
  m.covariance = 0.5 * (cov + cov.transpose());
  if (!(m.params(0) > 0.0)) throw EstimationError("correlation_from_coefficients: no counts");
  return m;
}

namespace {

constexpr std::uint64_t kStreamBeamBlock = 1;
constexpr std::uint64_t kStreamReference = 2;
constexpr std::uint64_t kStreamChiScan = 3;

std::uint64_t gamma_key(double gamma) { return std::bit_cast<std::uint64_t>(gamma); }

std::vector<double> to_double(const std::vector<std::int64_t>& counts) {
  return {counts.begin(), counts.end()};
}

std::vector<double> poisson_variance(const std::vector<double>& y) {
  std::vector<double> v(y.size());
  std::transform(y.begin(), y.end(), v.begin(), [](double c) { return std::max(c, 1.0); });
  return v;
}

SinusoidFit fit_values(std::span<const double> x, const std::vector<double>& y) {
  const auto var = poisson_variance(y);
  return fit_sinusoid(x, y, var);
}

// Counts of a flipper-on χ-scan (or the flipper-off reference) at spin analysis angle δ.
std::vector<double> chi_scan(const ExperimentConfig& config, double delta, double gamma,
                             bool flipper_on, const ScanOptions& options, Rng&& rng) {
  if (options.exact) {
    return expected_interferogram(config, delta, gamma, options.chi_grid, flipper_on);
  }
  const Interferogram g = flipper_on ? simulate_interferogram(config, delta, gamma, options.chi_grid, rng)
                                     : reference_run(config, delta, options.chi_grid, rng);
  return to_double(g.counts);
}

std::vector<double> beam_block(const ExperimentConfig& config, std::span<const double> deltas,
                               double gamma, PathBranch blocked, const ScanOptions& options,
                               Rng&& rng) {
  if (options.exact) return expected_beam_block(config, deltas, gamma, blocked);
  return to_double(simulate_beam_block(config, deltas, gamma, blocked, rng).counts);
}

bool uses_reference(const ScanOptions& o) { return o.reference.contrast || o.reference.phase; }

std::optional<SinusoidFit> reference_fit(const ExperimentConfig& config, double gamma,
                                         const ScanOptions& options) {
  if (!uses_reference(options)) return std::nullopt;
  const auto counts = chi_scan(config, options.reference_delta, gamma, false, options,
                               make_rng(config.seed, {gamma_key(gamma), kStreamReference}));
  return fit_values(options.chi_grid, counts);
}

SinusoidFit calibrated_chi_fit(const ExperimentConfig& config, double delta, double gamma,
                               std::uint64_t index, const std::optional<SinusoidFit>& ref,
                               const ScanOptions& options) {
  const auto counts = chi_scan(config, delta, gamma, true, options,
                               make_rng(config.seed, {gamma_key(gamma), kStreamChiScan, index}));
  const SinusoidFit fit = fit_values(options.chi_grid, counts);
  return ref ? normalize_by_reference(fit, *ref, options.reference) : fit;
}

void validate_delta_grid(std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("delta_grid", "must not be empty");
  std::vector<double> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end());
  constexpr double eps = 1e-9;
  if (g.front() > eps || g.back() < kPi - eps) {
    throw ConfigError("delta_grid", "must cover [0, pi]");
  }
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i] - g[i - 1] > kPi / 8.0 + eps) {
      throw ConfigError("delta_grid", "spacing must not exceed pi/8");
    }
  }
}

// δ_grid ∪ (δ_grid + π), reduced to [0, 2π) with duplicates removed.
std::vector<double> with_antipodes(std::span<const double> grid) {
  std::vector<double> all;
  for (double d : grid) {
    all.push_back(wrap_two_pi(d));
    all.push_back(wrap_two_pi(d + kPi));
  }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double d : all) {
    if (out.empty() || angular_distance(d, out.back()) > 1e-9) out.push_back(d);
  }
  if (out.size() > 1 && angular_distance(out.front(), out.back()) <= 1e-9) out.pop_back();
  return out;
}

void validate_gammas(std::span<const double> gammas) {
  if (gammas.empty()) throw ConfigError("gamma_list", "must not be empty");
  for (double g : gammas) {
    if (!std::isfinite(g)) throw ConfigError("gamma_list", "entries must be finite");
  }
}

// 1σ of argmax_t (C cos t + S sin t) given dC and dS gradients per independent model.
struct HarmonicTerm {
  const CorrelationModel* model;
  Vector6 grad_c;
  Vector6 grad_s;
};

double argmax_sigma(double c, double s, std::initializer_list<HarmonicTerm> terms) {
  const double r2 = c * c + s * s;
  if (!(r2 > 0.0)) return 0.0;
  double var = 0.0;
  for (const HarmonicTerm& t : terms) {
    const Vector6 g = (-s * t.grad_c + c * t.grad_s) / r2;
    var += g.dot(t.model->covariance * g);
  }
  return std::sqrt(std::max(0.0, var));
}

}  // namespace

double PolarMeasurement::s(double beta1, double beta1_p) const {
  return std::abs(z.expectation(beta1) - z.expectation(beta1_p) + x.expectation(beta1) +
                  x.expectation(beta1_p));
}

double PolarMeasurement::sigma_s(double beta1, double beta1_p) const {
  const Vector6 gz = z.gradient(beta1) - z.gradient(beta1_p);
  const Vector6 gx = x.gradient(beta1) + x.gradient(beta1_p);
  return std::sqrt(std::max(0.0, gz.dot(z.covariance * gz) + gx.dot(x.covariance * gx)));
}

double PolarMeasurement::sigma_beta1() const {
  // β₁ enters through u(β) = E_z(β) + E_x(β) = C cos β + S sin β.
  const double c = z.expectation(0.0) + x.expectation(0.0);
  const double s = z.expectation(kPi / 2.0) + x.expectation(kPi / 2.0);
  return argmax_sigma(c, s,
                      {{&z, z.gradient(0.0), z.gradient(kPi / 2.0)},
                       {&x, x.gradient(0.0), x.gradient(kPi / 2.0)}});
}

PolarMeasurement measure_polar(const ExperimentConfig& config, double gamma,
                               std::span<const double> delta_grid, const ScanOptions& options) {
  config.validate();
  validate_delta_grid(delta_grid);

  PolarMeasurement m;
  m.gamma = gamma;
  m.deltas = with_antipodes(delta_grid);

  // ±ẑ path projections: path II blocked keeps |I⟩, path I blocked keeps |II⟩.
  const auto path_i = beam_block(config, m.deltas, gamma, PathBranch::II, options,
                                 make_rng(config.seed, {gamma_key(gamma), kStreamBeamBlock, 0}));
  const auto path_ii = beam_block(config, m.deltas, gamma, PathBranch::I, options,
                                  make_rng(config.seed, {gamma_key(gamma), kStreamBeamBlock, 1}));
  m.z = correlation_from_fits(fit_values(m.deltas, path_i), fit_values(m.deltas, path_ii));

  // ±x̂ path projections: χ = 0 and χ = π of each χ-scan. Their sum and difference are
  // 2a and 2b of the χ-fit, so (a, b) versus δ carries the whole correlation.
  const auto ref = reference_fit(config, gamma, options);
  std::vector<Eigen::Vector2d> ab;
  std::vector<Eigen::Matrix2d> ab_cov;
  for (std::size_t k = 0; k < m.deltas.size(); ++k) {
    const SinusoidFit fit = calibrated_chi_fit(config, m.deltas[k], gamma, k, ref, options);
    ab.push_back(fit.coefficients().head<2>());
    ab_cov.push_back(fit.covariance.topLeftCorner<2, 2>());
  }
  m.x = correlation_from_coefficients(m.deltas, ab, ab_cov);
  return m;
}

double AzimuthalMeasurement::s(double alpha2_p) const {
  return std::abs(z_beta.value - z_beta_p.value + x_beta.expectation(-alpha2_p) +
                  x_beta_p.expectation(-alpha2_p));
}

double AzimuthalMeasurement::sigma_s(double alpha2_p) const {
  const Vector6 g1 = x_beta.gradient(-alpha2_p);
  const Vector6 g2 = x_beta_p.gradient(-alpha2_p);
  const double var = z_beta.sigma * z_beta.sigma + z_beta_p.sigma * z_beta_p.sigma +
                     g1.dot(x_beta.covariance * g1) + g2.dot(x_beta_p.covariance * g2);
  return std::sqrt(std::max(0.0, var));
}

double AzimuthalMeasurement::sigma_alpha2_p() const {
  // E(−t) = E(0) cos t − E(π/2) sin t.
  const double c = x_beta.expectation(0.0) + x_beta_p.expectation(0.0);
  const double s = -(x_beta.expectation(kPi / 2.0) + x_beta_p.expectation(kPi / 2.0));
  return argmax_sigma(
      c, s,
      {{&x_beta, x_beta.gradient(0.0), -x_beta.gradient(kPi / 2.0)},
       {&x_beta_p, x_beta_p.gradient(0.0), -x_beta_p.gradient(kPi / 2.0)}});
}

AzimuthalMeasurement measure_azimuthal(const ExperimentConfig& config, double gamma,
                                       const ScanOptions& options) {
  config.validate();
  constexpr double beta = kPi / 4.0;
  constexpr double beta_p = 3.0 * kPi / 4.0;
  // β, β⊥, β′, β′⊥
  const std::array<double, 4> deltas{beta, beta + kPi, beta_p, beta_p + kPi};

  AzimuthalMeasurement m;
  m.gamma = gamma;

  const auto path_i = beam_block(config, deltas, gamma, PathBranch::II, options,
                                 make_rng(config.seed, {gamma_key(gamma), kStreamBeamBlock, 0}));
  const auto path_ii = beam_block(config, deltas, gamma, PathBranch::I, options,
                                  make_rng(config.seed, {gamma_key(gamma), kStreamBeamBlock, 1}));
  m.z_beta = counts_to_expectation(std::array<double, 4>{path_i[0], path_i[1], path_ii[0], path_ii[1]});
  m.z_beta_p =
      counts_to_expectation(std::array<double, 4>{path_i[2], path_i[3], path_ii[2], path_ii[3]});

  const auto ref = reference_fit(config, gamma, options);
  std::array<SinusoidFit, 4> fits;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    fits[k] = calibrated_chi_fit(config, deltas[k], gamma, k, ref, options);
  }
  m.x_beta = correlation_from_fits(fits[0], fits[1]);
  m.x_beta_p = correlation_from_fits(fits[2], fits[3]);
  return m;
}

std::string_view to_string(ScanMethod m) {
  switch (m) {
    case ScanMethod::polar_adjusted:
      return "polar_adjusted";
    case ScanMethod::azimuthal_adjusted:
      return "azimuthal_adjusted";
    case ScanMethod::unadjusted:
      return "unadjusted";
  }
  return "unknown";
}

ScanResult analyze_polar(const PolarMeasurement& m, const ScanOptions& options) {
  const SurfaceMaximum best = maximize_s_surface(
      [&m](double b1, double b1p) { return m.s(b1, b1p); }, options.coarse_step,
      options.refine_tol);
  ScanResult r;
  r.gamma = m.gamma;
  r.beta1 = best.beta1;
  r.beta1_p = best.beta1_p;
  r.s = best.s;
  r.sigma_s = m.sigma_s(best.beta1, best.beta1_p);
  r.sigma_angle = m.sigma_beta1();
  r.method = ScanMethod::polar_adjusted;
  return r;
}

std::vector<ScanResult> analyze_azimuthal(const AzimuthalMeasurement& m,
                                          const ScanOptions& options) {
  const TorusDomain<1> domain{{0.0}, kTwoPi};
  const auto best = maximize_on_torus<1>([&m](const Point<1>& p) { return m.s(p[0]); }, domain,
                                         options.coarse_step, options.refine_tol);
  ScanResult adjusted;
  adjusted.gamma = m.gamma;
  adjusted.alpha2_p = best.x[0];
  adjusted.s = best.value;
  adjusted.sigma_s = m.sigma_s(best.x[0]);
  adjusted.sigma_angle = m.sigma_alpha2_p();
  adjusted.method = ScanMethod::azimuthal_adjusted;

  ScanResult plain;
  plain.gamma = m.gamma;
  plain.alpha2_p = 0.0;
  plain.s = m.s(0.0);
  plain.sigma_s = m.sigma_s(0.0);
  plain.method = ScanMethod::unadjusted;
  return {adjusted, plain};
}

std::vector<ScanResult> run_polar_scan(const ExperimentConfig& config,
                                       std::span<const double> gamma_list,
                                       std::span<const double> delta_grid,
                                       const ScanOptions& options) {
  validate_gammas(gamma_list);
  std::vector<ScanResult> out;
  out.reserve(gamma_list.size());
  for (double gamma : gamma_list) {
    out.push_back(analyze_polar(measure_polar(config, gamma, delta_grid, options), options));
  }
  return out;
}

std::vector<ScanResult> run_azimuthal_scan(const ExperimentConfig& config,
                                           std::span<const double> gamma_list,
                                           const ScanOptions& options) {
  validate_gammas(gamma_list);
  std::vector<ScanResult> out;
  out.reserve(2 * gamma_list.size());
  for (double gamma : gamma_list) {
    for (ScanResult& r : analyze_azimuthal(measure_azimuthal(config, gamma, options), options)) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<double> default_gamma_list() {
  std::vector<double> g;
  for (int i = 0; i <= 6; ++i) g.push_back(i * kPi / 6.0);
  for (int i = 5; i <= 8; ++i) g.push_back(i * kPi / 4.0);
  return g;
}

}  // namespace nbell
