// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "privtext/annotation.hpp"

namespace privtext {

struct AggregatedLabels {
  std::map<std::string, Label> labels;       // item_id -> decoded label
  std::map<std::string, double> confidence;  // 1.0 for vote-based methods
};

// Per-item majority; ties resolve to NonTarget.
AggregatedLabels majority_vote(const std::vector<Annotation>& annotations);

// Target iff strictly more than x annotations of the item are Target.
AggregatedLabels threshold_aggregate(const std::vector<Annotation>& annotations,
                                     int x);

enum class StepOneMethod { MV, MACE };
enum class StepTwoMethod { MV, Threshold };

struct MaceOptions {
  int iterations = 50;
  double smoothing = 0.5;
  int restarts = 10;
  std::uint64_t seed = 0;
  // When set, receives one smoothed log-likelihood sequence per restart.
  std::vector<std::vector<double>>* objective_trace = nullptr;
};

// Aggregates within each version first (MACE is fit per version, never
// across versions), then combines the per-version labels per item.
AggregatedLabels aggregate_two_step(const std::vector<Annotation>& annotations,
                                    StepOneMethod step1, StepTwoMethod step2,
                                    int threshold_x = 0,
                                    const MaceOptions& mace = {});

// Named method shorthand used by the CLI and experiment tables:
// mv, t:<x>, mace, mv_mv, mace_mv, mace_t0.
AggregatedLabels aggregate_by_name(const std::vector<Annotation>& annotations,
                                   const std::string& method,
                                   const MaceOptions& mace = {});

}  // namespace privtext
