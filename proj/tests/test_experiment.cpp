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

#include "nbell/angles.hpp"
#include "nbell/errors.hpp"
#include "nbell/experiment.hpp"
#include "nbell/quantum_core.hpp"
#include "oracle.hpp"

using namespace nbell;

namespace {

// 2R·p for the path-x, spin-δ outcome, blended toward the χ-average computed by quadrature.
double oracle_rate(const ExperimentConfig& c, double chi, double delta, double gamma) {
  const auto p = [&](double x) {
    return oracle::prob(oracle::bell(gamma, c.theta, x + c.dyn_offset),
                        oracle::ket(oracle::pi / 2.0, 0.0, 1), oracle::ket(delta, 0.0, 1));
  };
  double avg = 0.0;
  const int n = 720;
  for (int i = 0; i < n; ++i) avg += p(2.0 * oracle::pi * i / n);
  avg /= n;
  return 2.0 * c.max_rate * (avg + c.visibility * (p(chi) - avg));
}

}  // namespace

TEST(Config, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  const auto field_of = [](ExperimentConfig cfg) {
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  c.max_rate = 0.0;
  EXPECT_EQ(field_of(c), "max_rate");
  c = {};
  c.measure_time = -1.0;
  EXPECT_EQ(field_of(c), "measure_time");
  c = {};
  c.visibility = 1.5;
  EXPECT_EQ(field_of(c), "visibility");
  c.visibility = std::nan("");
  EXPECT_EQ(field_of(c), "visibility");
}

TEST(Grids, Defaults) {
  const auto chi = default_chi_grid();
  ASSERT_EQ(chi.size(), 32u);
  EXPECT_DOUBLE_EQ(chi[1], kPi / 8.0);
  const auto d = default_delta_grid();
  ASSERT_EQ(d.size(), 9u);
  EXPECT_DOUBLE_EQ(d.back(), kPi);
}

TEST(DetectionRate, FringeAtHalfPiDelta) {
  ExperimentConfig c;
  for (double chi = 0.0; chi < kTwoPi; chi += 0.1) {
    EXPECT_NEAR(detection_rate(c, chi, kPi / 2.0, 0.0), c.max_rate * (1.0 + std::cos(chi)) / 2.0,
                1e-12);
  }
  EXPECT_NEAR(detection_rate(c, 0.0, kPi / 2.0, 0.0), c.max_rate, 1e-12);
}

TEST(DetectionRate, ZeroVisibilityIsFlat) {
  ExperimentConfig c;
  c.visibility = 0.0;
  const double r0 = detection_rate(c, 0.0, 0.4, 0.7);
  for (double chi = 0.0; chi < kTwoPi; chi += 0.1) {
    EXPECT_NEAR(detection_rate(c, chi, 0.4, 0.7), r0, 1e-12);
  }
}

TEST(DetectionRate, GeometricPhaseShiftsFringe) {
  ExperimentConfig c;
  for (double g0 : {0.3, kPi / 6.0, 2.0}) {
    for (double chi = 0.0; chi < kTwoPi; chi += 0.1) {
      EXPECT_NEAR(detection_rate(c, chi - g0, kPi / 2.0, g0), detection_rate(c, chi, kPi / 2.0, 0.0),
                  1e-12);
    }
  }
}

TEST(DetectionRate, MatchesOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-kPi, kPi), v(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    ExperimentConfig c;
    c.visibility = v(rng);
    c.theta = u(rng);
    c.dyn_offset = u(rng);
    const double chi = u(rng), delta = u(rng), gamma = u(rng);
    EXPECT_NEAR(detection_rate(c, chi, delta, gamma), oracle_rate(c, chi, delta, gamma), 1e-10);
  }
}

TEST(DetectionRate, ReferenceIsGammaFree) {
  ExperimentConfig c;
  c.dyn_offset = 0.3;
  for (double chi = 0.0; chi < kTwoPi; chi += 0.1) {
    // Flipper off: both paths spin up, so the fringe at δ = 0 is full contrast.
    EXPECT_NEAR(reference_rate(c, chi, 0.0), c.max_rate * (1.0 + std::cos(chi + 0.3)), 1e-12);
  }
}

TEST(Simulate, MeanCountExample) {
  ExperimentConfig c;
  c.visibility = 0.5;
  const std::vector<double> chi{0.0};
  EXPECT_NEAR(expected_interferogram(c, kPi / 2.0, 0.0, chi)[0], 750.0, 1e-9);
  // Sample mean over many draws.
  Rng rng = make_rng(1);
  double sum = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) sum += sample_poisson(750.0, rng);
  EXPECT_NEAR(sum / n, 750.0, 4.0 * std::sqrt(750.0 / n));
}

TEST(Simulate, VanishingTimeGivesZeroCounts) {
  ExperimentConfig c;
  c.measure_time = 1e-300;
  Rng rng = make_rng(0);
  const auto g = simulate_interferogram(c, 0.3, 0.2, default_chi_grid(), rng);
  for (auto n : g.counts) EXPECT_EQ(n, 0);
}

TEST(Simulate, Deterministic) {
  ExperimentConfig c;
  Rng a = make_rng(42, {1, 2}), b = make_rng(42, {1, 2}), d = make_rng(43, {1, 2});
  const auto chi = default_chi_grid();
  const auto ga = simulate_interferogram(c, 0.5, 0.7, chi, a);
  const auto gb = simulate_interferogram(c, 0.5, 0.7, chi, b);
  const auto gd = simulate_interferogram(c, 0.5, 0.7, chi, d);
  EXPECT_EQ(ga.counts, gb.counts);
  EXPECT_NE(ga.counts, gd.counts);
  EXPECT_EQ(ga.chi_values, chi);
}

TEST(Simulate, EmptyGridRejected) {
  ExperimentConfig c;
  Rng rng = make_rng(0);
  EXPECT_THROW(simulate_interferogram(c, 0, 0, {}, rng), std::invalid_argument);
  EXPECT_THROW(reference_run(c, 0, {}, rng), std::invalid_argument);
  EXPECT_THROW(simulate_beam_block(c, {}, 0, PathBranch::I, rng), std::invalid_argument);
}

TEST(Simulate, SumRule) {
  ExperimentConfig c;
  for (double chi = 0.0; chi < kTwoPi; chi += 0.37) {
    for (double delta = 0.0; delta < kTwoPi; delta += 0.41) {
      const auto q = interferometer_quadruple(c, chi, delta, 0.9);
      const double total = std::accumulate(q.begin(), q.end(), 0.0);
      EXPECT_NEAR(total / (2.0 * c.max_rate * c.measure_time), 1.0, 1e-9);
    }
  }
}

TEST(ReferenceRun, PeakAndGammaIndependence) {
  ExperimentConfig c;
  const auto chi = default_chi_grid(360, 1.0);
  const auto m = expected_interferogram(c, 0.0, 0.0, chi, false);
  EXPECT_EQ(std::max_element(m.begin(), m.end()) - m.begin(), 0);
  EXPECT_EQ(m, expected_interferogram(c, 0.0, 2.5, chi, false));
}

TEST(BeamBlock, Examples) {
  ExperimentConfig c;
  const std::vector<double> d{0.0, kPi / 2.0, kPi};
  const auto block_ii = expected_beam_block(c, d, 0.0, PathBranch::II);
  const auto block_i = expected_beam_block(c, d, 0.0, PathBranch::I);
  EXPECT_NEAR(block_ii[0], c.max_rate * c.measure_time, 1e-9);
  EXPECT_GT(block_ii[0], block_ii[1]);
  EXPECT_GT(block_ii[1], block_ii[2]);
  EXPECT_NEAR(block_i[0], 0.0, 1e-9);
}

TEST(BeamBlock, GammaIndependentBitForBit) {
  ExperimentConfig c;
  c.visibility = 0.8;
  std::vector<double> d;
  for (int i = 0; i < 16; ++i) d.push_back(i * kPi / 8.0);
  for (PathBranch p : {PathBranch::I, PathBranch::II}) {
    const auto ref = expected_beam_block(c, d, 0.0, p);
    for (double g : {kPi, 0.5, 2.0, -1.0}) EXPECT_EQ(expected_beam_block(c, d, g, p), ref);
    Rng a = make_rng(3), b = make_rng(3);
    EXPECT_EQ(simulate_beam_block(c, d, 0.0, p, a).counts, simulate_beam_block(c, d, kPi, p, b).counts);
  }
}

TEST(CountsToExpectation, Examples) {
  EXPECT_DOUBLE_EQ(counts_to_expectation(CountQuadruple{50, 50, 50, 50}).value, 0.0);
  EXPECT_NEAR(counts_to_expectation(CountQuadruple{853, 146, 146, 853}).value, 1.0 / std::sqrt(2.0),
              1e-3);
  const Estimate e = counts_to_expectation(CountQuadruple{100, 0, 0, 100});
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  EXPECT_DOUBLE_EQ(e.sigma, 0.0);
  EXPECT_THROW(counts_to_expectation(CountQuadruple{}), EstimationError);
  EXPECT_THROW(counts_to_expectation(CountQuadruple{-1, 2, 0, 0}), EstimationError);
}

TEST(CountsToExpectation, SigmaMatchesBinomial) {
  // Var(E) for fixed total is (1 − E²)/T; the Poisson propagation reproduces it.
  const Estimate e = counts_to_expectation(CountQuadruple{700, 300, 200, 800});
  EXPECT_NEAR(e.sigma, std::sqrt((1.0 - e.value * e.value) / 2000.0), 1e-12);
}

TEST(SFromExpectations, Examples) {
  EXPECT_NEAR(s_from_expectations({0.707, -0.707, 0.707, 0.707}, {}).value, 2.828, 1e-12);
  EXPECT_DOUBLE_EQ(s_from_expectations({0, 0, 0, 0}, {}).value, 0.0);
  EXPECT_DOUBLE_EQ(s_from_expectations({1, 1, 1, 1}, {}).value, 2.0);
  EXPECT_DOUBLE_EQ(s_from_expectations({0, 0, 0, 0}, {3, 4, 0, 0}).sigma, 5.0);
  EXPECT_THROW(s_from_expectations({1.1, 0, 0, 0}, {}), std::domain_error);
}

TEST(MonteCarlo, ExpectationCoverage) {
  // Standard Bell angles at γ = 0: E(α′, β) = +1/√2 with the path-x/spin-δ quadruple.
  ExperimentConfig c;
  c.measure_time = 400.0;
  const auto q = interferometer_quadruple(c, 0.0, kPi / 4.0, 0.0);
  ASSERT_GE(q[0] + q[1] + q[2] + q[3], 1e4);
  const double exact = counts_to_expectation(q).value;
  EXPECT_NEAR(exact, 1.0 / std::sqrt(2.0), 1e-12);
  int covered = 0;
  const int trials = 1000;
  for (int s = 0; s < trials; ++s) {
    Rng rng = make_rng(static_cast<std::uint64_t>(s), {77});
    CountQuadruple n{sample_poisson(q[0], rng), sample_poisson(q[1], rng),
                     sample_poisson(q[2], rng), sample_poisson(q[3], rng)};
    const Estimate e = counts_to_expectation(n);
    if (std::abs(e.value - exact) <= 3.0 * e.sigma) ++covered;
  }
  EXPECT_GE(covered, 990);
}
