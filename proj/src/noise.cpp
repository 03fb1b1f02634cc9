// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/noise.hpp"

#include <cmath>
#include <limits>

namespace privtext {

void PrivacyParams::validate() const {
  if (epsilon <= 0) throw NonPositiveEpsilon("epsilon must be positive");
  if (delta <= 0 || delta >= 1)
    throw ConfigError("delta must lie in (0, 1)");
  if (clip_bound <= 0) throw ConfigError("clip bound must be positive");
}

namespace {

// exp(y^2) * erfc(y) for y >= 0 without overflow.
double erfcx_nonneg(double y) {
  if (y < 25.0) return std::exp(y * y) * std::erfc(y);
  // Asymptotic series 1/(y sqrt(pi)) * sum (-1)^k (2k-1)!! / (2 y^2)^k.
  const double inv2y2 = 1.0 / (2.0 * y * y);
  double term = 1.0, sum = 1.0, num = 1.0;
  for (int k = 1; k < 12; ++k) {
    num *= 2 * k - 1;
    term *= -inv2y2;
    const double add = num * term;
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
  }
  return sum / (y * std::sqrt(M_PI));
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

}  // namespace

double log_std_normal_cdf(double x) {
  if (x > -0.5) return std::log(std_normal_cdf(x));
  const double y = -x * M_SQRT1_2;
  return -0.5 * x * x + std::log(0.5 * erfcx_nonneg(y));
}

double gaussian_mechanism_delta(double epsilon, double l2_sensitivity,
                                double sigma) {
  const double a = l2_sensitivity / (2.0 * sigma);
  const double b = epsilon * sigma / l2_sensitivity;
  const double first = std_normal_cdf(a - b);
  const double log_second = epsilon + log_std_normal_cdf(-a - b);
  const double second =
      log_second < -700.0 ? 0.0 : std::exp(log_second);
  return first - second;
}

double calibrate_noise(const PrivacyParams& params, double sensitivity) {
  params.validate();
  if (sensitivity <= 0) throw ConfigError("sensitivity must be positive");

  if (params.noise_family == NoiseFamily::Laplace)
    return sensitivity / params.epsilon;

  // delta(sigma) is strictly decreasing in sigma; bracket then bisect.
  const double target = params.delta;
  double lo = sensitivity * 1e-15;
  double hi = sensitivity;
  int guard = 0;
  while (gaussian_mechanism_delta(params.epsilon, sensitivity, hi) > target) {
    hi *= 2.0;
    if (++guard > 200)
      throw CalibrationDidNotConverge("no upper bracket for sigma");
  }
  guard = 0;
  while (gaussian_mechanism_delta(params.epsilon, sensitivity, lo) < target) {
    lo *= 0.5;
    if (++guard > 200)
      throw CalibrationDidNotConverge("no lower bracket for sigma");
  }

  for (int iter = 0; iter < 500; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted in double
    const double d = gaussian_mechanism_delta(params.epsilon, sensitivity, mid);
    if (d > target)
      lo = mid;
    else
      hi = mid;
  }

  // hi satisfies delta(hi) <= target; require the stated residual.
  const double residual = std::fabs(
      gaussian_mechanism_delta(params.epsilon, sensitivity, hi) - target);
  if (residual > 1e-10)
    throw CalibrationDidNotConverge("bisection residual above tolerance");
  return hi;
}

}  // namespace privtext
