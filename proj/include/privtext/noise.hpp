// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "privtext/errors.hpp"

namespace privtext {

enum class NoiseFamily { Gaussian, Laplace };

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 1e-4;
  double clip_bound = 1.0;  // C
  NoiseFamily noise_family = NoiseFamily::Gaussian;

  void validate() const;
};

// Exact delta spent by the Gaussian mechanism at noise level sigma:
//   Phi(d/(2s) - es/d) - e^eps * Phi(-d/(2s) - es/d)
// with d = l2_sensitivity, s = sigma. Stable for very large epsilon
// (the second term is evaluated in log space).
double gaussian_mechanism_delta(double epsilon, double l2_sensitivity,
                                double sigma);

// Noise scale for the mechanism: Laplace b = sensitivity / epsilon;
// Gaussian sigma is the analytic-mechanism solution found by bisection,
// |delta(sigma) - delta| <= 1e-10.
double calibrate_noise(const PrivacyParams& params, double sensitivity);

// log of the standard normal CDF, accurate deep into the lower tail.
double log_std_normal_cdf(double x);

}  // namespace privtext
