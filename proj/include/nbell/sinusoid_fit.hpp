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

// Weighted least-squares fit of y(x) = a + b·cos x + c·sin x, reported as
// mean + amplitude·cos(x − phase), and the reference-run normalization applied to it.

#include <Eigen/Core>

#include <span>

#include "nbell/experiment.hpp"

namespace nbell {

struct SinusoidFit {
  double mean = 0.0;
  double amplitude = 0.0;  // ≥ 0
  double phase = 0.0;      // [0, 2π)
  double visibility = 0.0; // amplitude / mean
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // of (a, b, c)
  double residual_chi2 = 0.0;
  bool over_unity = false;  // set when normalization clipped the visibility to 1

  /// (a, b, c) = (mean, amplitude·cos phase, amplitude·sin phase).
  Eigen::Vector3d coefficients() const;
  double evaluate(double x) const;
};

/// General weighted fit; `variance[i]` is the variance of `y[i]`.
/// Throws FitError for fewer than 5 points, coverage of less than one period, or a
/// rank-deficient design.
SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y,
                         std::span<const double> variance);

/// Poisson-weighted fit of counts (variance max(count, 1)).
SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const std::int64_t> counts);

SinusoidFit fit_sinusoid(const Interferogram& gram);
SinusoidFit fit_sinusoid(const BeamBlockScan& scan);

/// 1σ uncertainty of the visibility, propagated from the coefficient covariance.
double visibility_sigma(const SinusoidFit& fit);

struct ReferenceMode {
  bool contrast = true;  // divide the visibility by the reference visibility
  bool phase = true;     // subtract the reference phase
};

/// Visibility ↦ fit.visibility / ref.visibility (clipped to 1 with `over_unity` set),
/// phase ↦ fit.phase − ref.phase. The reference is treated as a calibration constant.
/// Throws NormalizationError when ref.visibility is not positive.
SinusoidFit normalize_by_reference(const SinusoidFit& fit, const SinusoidFit& ref,
                                   ReferenceMode mode = {});

struct Projections {
  double at_zero = 0.0;  // model at χ = 0
  double at_pi = 0.0;    // model at χ = π
};

Projections projections_from_fit(const SinusoidFit& fit);

}  // namespace nbell
