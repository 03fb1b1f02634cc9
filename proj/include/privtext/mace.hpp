// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "privtext/aggregation.hpp"

namespace privtext {

// Binary-label annotator model fit by EM. The true label is uniform a
// priori; each annotation copies it with worker competence theta, otherwise
// it is drawn from the worker's spam distribution xi.
struct MaceModel {
  std::map<std::string, double> competences;  // worker -> theta
  std::map<std::string, std::array<double, 2>>
      spam_dists;  // worker -> (P(Target), P(NonTarget))
  std::map<std::string, std::array<double, 2>>
      posteriors;  // item -> (P(Target|A), P(NonTarget|A))
  double log_likelihood = 0;
};

// Seeded random restarts, `iterations` EM steps each; returns the restart
// with the highest final log-likelihood. Within each run the log-likelihood
// is non-decreasing.
MaceModel mace_fit(const std::vector<Annotation>& annotations,
                   const MaceOptions& options);

// Items ranked by max-posterior confidence; the top ceil(coverage * n)
// receive their argmax labels (posterior ties -> NonTarget).
AggregatedLabels mace_decode(const MaceModel& model, double coverage);

}  // namespace privtext
