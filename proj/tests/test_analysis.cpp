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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "nbell/analysis.hpp"
#include "nbell/angles.hpp"
#include "nbell/errors.hpp"

using namespace nbell;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

ScanOptions exact_options() {
  ScanOptions o;
  o.exact = true;
  return o;
}

// Expected counts for the Bell test at (γ = 0, standard angles) built from the simulator
// quadruples: beam block for α = ẑ, path-x at χ = 0 for α′ = x̂.
std::array<std::array<double, 4>, 4> standard_quadruples(const ExperimentConfig& c) {
  return {beam_block_quadruple(c, kPi / 4.0, 0.0), beam_block_quadruple(c, 3.0 * kPi / 4.0, 0.0),
          interferometer_quadruple(c, 0.0, kPi / 4.0, 0.0),
          interferometer_quadruple(c, 0.0, 3.0 * kPi / 4.0, 0.0)};
}

}  // namespace

TEST(CorrelationModel, ExpectationAndGradient) {
  CorrelationModel m;
  m.params << 2.0, 0.1, 0.2, 0.0, 1.0, 0.5;
  m.covariance = Matrix6::Identity() * 1e-4;
  const double t = 0.7;
  EXPECT_NEAR(m.expectation(t), (std::cos(t) + 0.5 * std::sin(t)) / 2.0, 1e-15);
  const double h = 1e-6;
  for (int i = 0; i < 6; ++i) {
    CorrelationModel up = m, dn = m;
    up.params(i) += h;
    dn.params(i) -= h;
    EXPECT_NEAR(m.gradient(t)(i), (up.expectation(t) - dn.expectation(t)) / (2 * h), 1e-8);
  }
  EXPECT_NEAR(m.sigma(t), 1e-2 * m.gradient(t).norm(), 1e-12);
}

TEST(PolarPipeline, ExactModeMatchesAnalytic) {
  ExperimentConfig c;
  const auto opt = exact_options();
  for (double g : default_gamma_list()) {
    const PolarMeasurement m = measure_polar(c, g, default_delta_grid(), opt);
    for (double b : {0.0, 0.4, 1.3, 2.9, -2.0}) {
      EXPECT_NEAR(m.z.expectation(b),
                  expectation(bell_state(g), MeasurementDirection::path(0.0),
                              MeasurementDirection::spin(b)),
                  1e-9);
      EXPECT_NEAR(m.x.expectation(b),
                  expectation(bell_state(g), MeasurementDirection::path(kPi / 2.0),
                              MeasurementDirection::spin(b)),
                  1e-9);
    }
    const ScanResult r = analyze_polar(m, opt);
    EXPECT_NEAR(r.s, s_polar_max(g), 1e-6) << "gamma " << g;
    EXPECT_NEAR(*r.beta1, std::atan(std::cos(g)), 1e-5) << "gamma " << g;
    EXPECT_FALSE(r.alpha2_p.has_value());
  }
}

TEST(PolarPipeline, ExactModeWithImperfectionsAndOffset) {
  // Phase referencing removes the dynamical offset; the surface still matches the quantum
  // prediction at V = 1.
  ExperimentConfig c;
  c.dyn_offset = 1.1;
  const auto opt = exact_options();
  const PolarMeasurement m = measure_polar(c, kPi / 4.0, default_delta_grid(), opt);
  EXPECT_NEAR(analyze_polar(m, opt).s, 2.0 * std::sqrt(1.5), 1e-6);
}

TEST(PolarPipeline, ThetaLowersS) {
  ExperimentConfig c;
  c.theta = 0.3;
  const auto opt = exact_options();
  const double s = analyze_polar(measure_polar(c, 0.0, default_delta_grid(), opt), opt).s;
  EXPECT_LT(s, kTsirelson - 1e-3);
  EXPECT_GT(s, 2.0);
}

TEST(PolarPipeline, DeltaGridValidation) {
  ExperimentConfig c;
  const std::vector<double> sparse{0.0, kPi / 2.0, kPi};
  try {
    measure_polar(c, 0.0, sparse);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "delta_grid");
  }
  const std::vector<double> partial{0.0, kPi / 8.0, kPi / 4.0};
  EXPECT_THROW(measure_polar(c, 0.0, partial), ConfigError);
}

TEST(AzimuthalPipeline, ExactModeMatchesAnalytic) {
  ExperimentConfig c;
  const auto opt = exact_options();
  for (double g : default_gamma_list()) {
    const AzimuthalMeasurement m = measure_azimuthal(c, g, opt);
    for (double a : {0.0, 0.5, 2.0, 4.0}) {
      EXPECT_NEAR(m.s(a), s_azimuthal(a, 0.0, 0.0, g), 1e-9);
    }
    const auto r = analyze_azimuthal(m, opt);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0].s, kTsirelson, 1e-6);
    EXPECT_NEAR(angular_distance(*r[0].alpha2_p, g), 0.0, 1e-5) << "gamma " << g;
    EXPECT_EQ(r[0].method, ScanMethod::azimuthal_adjusted);
    EXPECT_NEAR(r[1].s, s_standard_angles(g), 1e-6);
    EXPECT_EQ(r[1].method, ScanMethod::unadjusted);
  }
}

TEST(AzimuthalPipeline, ScanExamples) {
  ExperimentConfig c;
  c.measure_time = 400.0;
  const std::vector<double> gammas{0.0, kPi / 6.0, kPi};
  const auto rows = run_azimuthal_scan(c, gammas);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NEAR(angular_distance(*rows[0].alpha2_p, 0.0), 0.0, 4.0 * rows[0].sigma_angle + 1e-3);
  EXPECT_NEAR(angular_distance(*rows[2].alpha2_p, kPi / 6.0), 0.0,
              4.0 * rows[2].sigma_angle + 1e-3);
  EXPECT_NEAR(rows[4].s, kTsirelson, 4.0 * rows[4].sigma_s);
  EXPECT_NEAR(rows[5].s, 0.0, 4.0 * rows[5].sigma_s + 0.02);
}

TEST(PolarPipeline, ScanExamples) {
  ExperimentConfig c;
  c.measure_time = 400.0;
  const std::vector<double> gammas{0.0, kPi / 2.0};
  const auto rows = run_polar_scan(c, gammas, default_delta_grid());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].s, kTsirelson, 4.0 * rows[0].sigma_s);
  EXPECT_NEAR(*rows[0].beta1, kPi / 4.0, 4.0 * rows[0].sigma_angle);
  EXPECT_NEAR(angular_distance(*rows[0].beta1_p, 3.0 * kPi / 4.0), 0.0, 0.05);
  EXPECT_NEAR(rows[1].s, 2.0, 4.0 * rows[1].sigma_s);
}

TEST(Scans, EmptyGammaListRejected) {
  ExperimentConfig c;
  EXPECT_THROW(run_polar_scan(c, {}, default_delta_grid()), ConfigError);
  EXPECT_THROW(run_azimuthal_scan(c, {}), ConfigError);
}

TEST(Scans, DeterministicAndOrderIndependent) {
  ExperimentConfig c;
  c.seed = 17;
  const std::vector<double> a{0.0, 1.0}, b{1.0, 0.0};
  const auto ra = run_polar_scan(c, a, default_delta_grid());
  const auto rb = run_polar_scan(c, b, default_delta_grid());
  EXPECT_EQ(ra[0].s, rb[1].s);
  EXPECT_EQ(ra[1].s, rb[0].s);
  EXPECT_EQ(run_polar_scan(c, a, default_delta_grid())[0].s, ra[0].s);
  c.seed = 18;
  EXPECT_NE(run_polar_scan(c, a, default_delta_grid())[0].s, ra[0].s);
}

TEST(Estimator, UnbiasedWithCalibratedSigma) {
  ExperimentConfig c;
  c.measure_time = 400.0;
  const auto q = standard_quadruples(c);
  for (const auto& qq : q) ASSERT_GE(std::accumulate(qq.begin(), qq.end(), 0.0), 1e4);
  const int trials = 1000;
  std::vector<double> s(trials);
  double sigma_mean = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(static_cast<std::uint64_t>(t), {9});
    std::array<double, 4> e{}, se{};
    for (int k = 0; k < 4; ++k) {
      const CountQuadruple n{sample_poisson(q[k][0], rng), sample_poisson(q[k][1], rng),
                             sample_poisson(q[k][2], rng), sample_poisson(q[k][3], rng)};
      const Estimate est = counts_to_expectation(n);
      e[k] = est.value;
      se[k] = est.sigma;
    }
    const Estimate st = s_from_expectations(e, se);
    s[t] = st.value;
    sigma_mean += st.sigma / trials;
  }
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / trials;
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean) / (trials - 1);
  EXPECT_NEAR(mean, kTsirelson, 0.01);
  EXPECT_NEAR(std::sqrt(var) / sigma_mean, 1.0, 0.2);
}

TEST(ContrastThreshold, SScalesWithVisibility) {
  const auto opt = exact_options();
  for (double v : {0.3, 0.5, 1.0 / std::sqrt(2.0), 0.8, 0.95}) {
    ExperimentConfig c;
    c.visibility = v;
    const double s = analyze_polar(measure_polar(c, 0.0, default_delta_grid(), opt), opt).s;
    EXPECT_NEAR(s / (v * kTsirelson), 1.0, 0.02) << "V " << v;
    const double sa = analyze_azimuthal(measure_azimuthal(c, 0.0, opt), opt)[0].s;
    EXPECT_NEAR(sa / (v * kTsirelson), 1.0, 0.02) << "V " << v;
  }
}

TEST(ContrastThreshold, MonteCarloSides) {
  ExperimentConfig c;
  c.measure_time = 400.0;
  c.visibility = 0.8;
  const auto hi = run_polar_scan(c, std::vector<double>{0.0}, default_delta_grid());
  EXPECT_GT(hi[0].s - 2.0, 3.0 * hi[0].sigma_s);
  c.visibility = 0.5;
  const auto lo = run_polar_scan(c, std::vector<double>{0.0}, default_delta_grid());
  EXPECT_LT(lo[0].s, 2.0);
}

namespace {

// Ratio of the seed-to-seed scatter of S* to the mean propagated sigma_S.
double scatter_ratio(double visibility) {
  ExperimentConfig c;
  c.measure_time = 400.0;
  c.visibility = visibility;
  const int trials = 200;
  std::vector<double> s;
  double sig = 0.0;
  for (int t = 0; t < trials; ++t) {
    c.seed = static_cast<std::uint64_t>(t);
    const auto r = run_polar_scan(c, std::vector<double>{0.0}, default_delta_grid());
    s.push_back(r[0].s);
    sig += r[0].sigma_s / trials;
  }
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / trials;
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean) / (trials - 1);
  return std::sqrt(var) / sig;
}

}  // namespace

TEST(Sigma, PolarPropagationMatchesScatter) { EXPECT_NEAR(scatter_ratio(0.9), 1.0, 0.2); }

TEST(Sigma, PolarPropagationConservativeAtFullContrast) {
  // Zero-mean beam-block points carry the unit variance floor.
  EXPECT_LE(scatter_ratio(1.0), 1.0);
}
