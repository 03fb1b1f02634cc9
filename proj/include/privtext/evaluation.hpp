// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "privtext/aggregation.hpp"
#include "privtext/lexicon.hpp"

namespace privtext {

struct EvalReport {
  double f1 = 0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
  std::string metadata;  // pipeline / epsilon / method descriptor
};

// Binary F1 with Target as the positive class; F1 = 0 when tp = 0.
EvalReport f1_score(const AggregatedLabels& pred, const Corpus& gold);

struct SignificanceResult {
  double p_value = 1.0;
  bool significant = false;
  double observed_diff = 0;  // F1(a) - F1(b)
};

// Paired bootstrap over items: resample with replacement, F1 difference per
// resample, two-sided p from the sign-inversion fraction.
SignificanceResult significance_test(const AggregatedLabels& pred_a,
                                     const AggregatedLabels& pred_b,
                                     const Corpus& gold, double alpha,
                                     int resamples, std::uint64_t seed);

// Total indicator occurrences over target-class texts and over the rest.
std::pair<std::size_t, std::size_t> indicator_counts(
    const Corpus& dataset, const TaskLexicon& lexicon);

struct ChangeHistogram {
  // Bucket label (e.g. "0", "6", "7-11") and fraction of points.
  std::vector<std::pair<std::string, double>> buckets;
};

// Changed words per point = original length minus token-LCS length with the
// rewritten text. Buckets: 0..6 singly, then width-5 from 7 upward.
ChangeHistogram copied_word_distribution(
    const Corpus& original,
    const std::map<std::string, TokenSeq>& rewritten);

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

// Fraction of items labeled Target.
double class_share(const std::map<std::string, Label>& labels);
double class_share(const Corpus& gold);

// Per class, the top-k non-stopword tokens by count (ties lexicographic).
struct TermTable {
  std::vector<std::pair<std::string, std::size_t>> target;
  std::vector<std::pair<std::string, std::size_t>> non_target;
};
TermTable top_k_terms(const Corpus& dataset, std::size_t k,
                      const std::set<std::string>& stopwords);

// Small built-in English function-word list for top_k_terms.
const std::set<std::string>& default_stopwords();

}  // namespace privtext
