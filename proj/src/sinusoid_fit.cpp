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

#include "nbell/sinusoid_fit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nbell/angles.hpp"
#include "nbell/errors.hpp"

namespace nbell {

Eigen::Vector3d SinusoidFit::coefficients() const {
  return {mean, amplitude * std::cos(phase), amplitude * std::sin(phase)};
}

double SinusoidFit::evaluate(double x) const { return mean + amplitude * std::cos(x - phase); }

namespace {

SinusoidFit from_coefficients(const Eigen::Vector3d& coef, const Eigen::Matrix3d& cov,
                              double chi2) {
  SinusoidFit f;
  f.mean = coef(0);
  f.amplitude = std::hypot(coef(1), coef(2));
  f.phase = f.amplitude > 0.0 ? wrap_two_pi(std::atan2(coef(2), coef(1))) : 0.0;
  f.visibility = f.mean > 0.0 ? f.amplitude / f.mean : 0.0;
  f.covariance = cov;
  f.residual_chi2 = chi2;
  return f;
}

// Effective span of the abscissae, counting one sample spacing beyond the extremes.
double coverage(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  return (*hi - *lo) * n / (n - 1.0);
}

}  // namespace

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y,
                         std::span<const double> variance) {
  if (x.size() != y.size() || x.size() != variance.size()) {
    throw FitError("fit_sinusoid: mismatched input lengths");
  }
  if (x.size() < 5) throw FitError("fit_sinusoid: at least 5 points are required");
  if (coverage(x) < kTwoPi * (1.0 - 1e-9)) {
    throw FitError("fit_sinusoid: abscissae must span at least one period");
  }

  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(variance[i] > 0.0)) throw FitError("fit_sinusoid: variances must be positive");
    const Eigen::Vector3d row(1.0, std::cos(x[i]), std::sin(x[i]));
    const double w = 1.0 / variance[i];
    normal.noalias() += w * row * row.transpose();
    rhs.noalias() += w * y[i] * row;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d ev = eig.eigenvalues();
  if (!(ev(0) > 1e-12 * ev(2))) throw FitError("fit_sinusoid: rank-deficient design");

  const Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
  const Eigen::Vector3d coef = ldlt.solve(rhs);
  const Eigen::Matrix3d cov = ldlt.solve(Eigen::Matrix3d::Identity());

  double chi2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (coef(0) + coef(1) * std::cos(x[i]) + coef(2) * std::sin(x[i]));
    chi2 += r * r / variance[i];
  }
  return from_coefficients(coef, 0.5 * (cov + cov.transpose()), chi2);
}

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const std::int64_t> counts) {
  std::vector<double> y(counts.size());
  std::vector<double> var(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    y[i] = static_cast<double>(counts[i]);
    var[i] = std::max(y[i], 1.0);
  }
  return fit_sinusoid(x, y, var);
}

SinusoidFit fit_sinusoid(const Interferogram& gram) {
  return fit_sinusoid(gram.chi_values, gram.counts);
}

SinusoidFit fit_sinusoid(const BeamBlockScan& scan) {
  return fit_sinusoid(scan.delta_values, scan.counts);
}

double visibility_sigma(const SinusoidFit& fit) {
  if (!(fit.mean > 0.0) || !(fit.amplitude > 0.0)) return 0.0;
  const Eigen::Vector3d c = fit.coefficients();
  // V = sqrt(b² + c²)/a.
  const Eigen::Vector3d grad(-fit.amplitude / (fit.mean * fit.mean),
                             c(1) / (fit.amplitude * fit.mean), c(2) / (fit.amplitude * fit.mean));
  return std::sqrt(std::max(0.0, grad.dot(fit.covariance * grad)));
}

SinusoidFit normalize_by_reference(const SinusoidFit& fit, const SinusoidFit& ref,
                                   ReferenceMode mode) {
  SinusoidFit out = fit;
  double scale = 1.0;
  if (mode.contrast) {
    if (!(ref.visibility > 0.0)) {
      throw NormalizationError("normalize_by_reference: reference visibility must be positive");
    }
    double v = fit.visibility / ref.visibility;
    if (v > 1.0) {
      v = 1.0;
      out.over_unity = true;
    }
    out.visibility = v;
    out.amplitude = v * fit.mean;
    scale = fit.amplitude > 0.0 ? out.amplitude / fit.amplitude : 1.0 / ref.visibility;
  }
  double shift = 0.0;
  if (mode.phase) {
    shift = ref.phase;
    out.phase = wrap_two_pi(fit.phase - ref.phase);
  }
  // (b, c) are rotated by −shift and scaled; a is untouched.
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  const double cs = std::cos(shift);
  const double sn = std::sin(shift);
  t(1, 1) = scale * cs;
  t(1, 2) = scale * sn;
  t(2, 1) = -scale * sn;
  t(2, 2) = scale * cs;
  out.covariance = t * fit.covariance * t.transpose();
  return out;
}

Projections projections_from_fit(const SinusoidFit& fit) {
  return {fit.evaluate(0.0), fit.evaluate(kPi)};
}

}  // namespace nbell
