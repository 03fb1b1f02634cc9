// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "privtext/rng.hpp"

namespace privtext {

namespace {

double f1_from_pairs(const std::vector<std::pair<Label, Label>>& pairs) {
  long tp = 0, fp = 0, fn = 0;
  for (const auto& [pred, gold] : pairs) {
    if (pred == Label::Target && gold == Label::Target) ++tp;
    if (pred == Label::Target && gold == Label::NonTarget) ++fp;
    if (pred == Label::NonTarget && gold == Label::Target) ++fn;
  }
  if (tp == 0) return 0.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

std::vector<std::pair<Label, Label>> paired(const AggregatedLabels& pred,
                                            const Corpus& gold) {
  std::vector<std::pair<Label, Label>> out;
  out.reserve(gold.points.size());
  for (const DataPoint& p : gold.points) {
    const auto it = pred.labels.find(p.id);
    if (it == pred.labels.end())
      throw MissingPrediction("no prediction for item \"" + p.id + "\"");
    out.emplace_back(it->second, p.gold);
  }
  return out;
}

}  // namespace

EvalReport f1_score(const AggregatedLabels& pred, const Corpus& gold) {
  EvalReport r;
  for (const auto& [p, g] : paired(pred, gold)) {
    if (p == Label::Target && g == Label::Target) ++r.tp;
    if (p == Label::Target && g == Label::NonTarget) ++r.fp;
    if (p == Label::NonTarget && g == Label::Target) ++r.fn;
    if (p == Label::NonTarget && g == Label::NonTarget) ++r.tn;
  }
  r.f1 = r.tp == 0 ? 0.0 : 2.0 * r.tp / (2.0 * r.tp + r.fp + r.fn);
  return r;
}

SignificanceResult significance_test(const AggregatedLabels& pred_a,
                                     const AggregatedLabels& pred_b,
                                     const Corpus& gold, double alpha,
                                     int resamples, std::uint64_t seed) {
  const auto pairs_a = paired(pred_a, gold);
  const auto pairs_b = paired(pred_b, gold);
  const std::size_t n = pairs_a.size();

  SignificanceResult res;
  res.observed_diff = f1_from_pairs(pairs_a) - f1_from_pairs(pairs_b);
  if (res.observed_diff == 0) {
    res.p_value = 1.0;
    res.significant = false;
    return res;
  }

  const double obs_sign = res.observed_diff > 0 ? 1.0 : -1.0;
  SplitMix64 rng(mix_seed(seed, fnv1a("significance_test")));
  std::vector<std::pair<Label, Label>> sample_a(n), sample_b(n);
  long inversions = 0;
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(rng.next_below(n));
      sample_a[i] = pairs_a[j];
      sample_b[i] = pairs_b[j];
    }
    const double diff = f1_from_pairs(sample_a) - f1_from_pairs(sample_b);
    if (diff * obs_sign <= 0) ++inversions;
  }
  res.p_value = std::min(
      1.0, 2.0 * static_cast<double>(inversions) / resamples);
  res.significant = res.p_value < alpha;
  return res;
}

std::pair<std::size_t, std::size_t> indicator_counts(
    const Corpus& dataset, const TaskLexicon& lexicon) {
  std::size_t target = 0, rest = 0;
  for (const DataPoint& p : dataset.points) {
    const std::size_t n = lexicon.count_occurrences(p.tokens);
    (p.gold == Label::Target ? target : rest) += n;
  }
  return {target, rest};
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

ChangeHistogram copied_word_distribution(
    const Corpus& original, const std::map<std::string, TokenSeq>& rewritten) {
  if (original.points.size() != rewritten.size())
    throw IdMismatch("original and rewritten datasets differ in size");

  std::vector<std::size_t> changed;
  changed.reserve(original.points.size());
  for (const DataPoint& p : original.points) {
    const auto it = rewritten.find(p.id);
    if (it == rewritten.end())
      throw IdMismatch("no rewritten text for item \"" + p.id + "\"");
    changed.push_back(p.tokens.size() - lcs_length(p.tokens, it->second));
  }

  const std::size_t max_changed =
      *std::max_element(changed.begin(), changed.end());
  // Bucket index: 0..6 singly, then width-5 buckets starting at 7.
  const auto bucket_of = [](std::size_t c) {
    return c <= 6 ? c : 7 + (c - 7) / 5;
  };
  const std::size_t n_buckets = bucket_of(max_changed) + 1;
  std::vector<std::size_t> counts(n_buckets, 0);
  for (std::size_t c : changed) ++counts[bucket_of(c)];

  ChangeHistogram h;
  const double total = static_cast<double>(changed.size());
  for (std::size_t b = 0; b < n_buckets; ++b) {
    std::string label;
    if (b <= 6) {
      label = std::to_string(b);
    } else {
      const std::size_t lo = 7 + (b - 7) * 5;
      label = std::to_string(lo) + "-" + std::to_string(lo + 4);
    }
    h.buckets.emplace_back(std::move(label), counts[b] / total);
  }
  return h;
}

double class_share(const std::map<std::string, Label>& labels) {
  if (labels.empty()) throw EmptyInput("no labels for class share");
  std::size_t target = 0;
  for (const auto& [id, l] : labels)
    if (l == Label::Target) ++target;
  return static_cast<double>(target) / static_cast<double>(labels.size());
}

double class_share(const Corpus& gold) {
  if (gold.points.empty()) throw EmptyInput("no labels for class share");
  std::size_t target = 0;
  for (const DataPoint& p : gold.points)
    if (p.gold == Label::Target) ++target;
  return static_cast<double>(target) /
         static_cast<double>(gold.points.size());
}

TermTable top_k_terms(const Corpus& dataset, std::size_t k,
                      const std::set<std::string>& stopwords) {
  if (k < 1) throw ConfigError("k must be >= 1");
  std::map<std::string, std::size_t> target_counts, rest_counts;
  for (const DataPoint& p : dataset.points) {
    auto& counts =
        p.gold == Label::Target ? target_counts : rest_counts;
    for (const std::string& t : p.tokens)
      if (!stopwords.count(t)) ++counts[t];
  }

  const auto top = [k](const std::map<std::string, std::size_t>& counts) {
    std::vector<std::pair<std::string, std::size_t>> v(counts.begin(),
                                                       counts.end());
    // Count descending, lexicographic ascending on ties; the map order
    // already provides the latter, so a stable sort on count suffices.
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;
    });
    if (v.size() > k) v.resize(k);
    return v;
  };

  return {top(target_counts), top(rest_counts)};
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "and",  "are",  "as",   "at",   "be",   "but",
      "by",   "for",  "from", "had",  "has",  "have", "i",    "in",
      "is",   "it",   "its",  "me",   "my",   "of",   "on",   "or",
      "s",    "so",   "that", "the",  "their", "then", "there", "these",
      "they", "this", "to",   "was",  "we",   "were", "what", "which",
      "will", "with", "you",  "your"};
  return words;
}

}  // namespace privtext
