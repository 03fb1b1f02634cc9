// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/aggregation.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "privtext/mace.hpp"

namespace privtext {

namespace {

// item -> (target count, total count)
std::map<std::string, std::pair<int, int>> tally(
    const std::vector<Annotation>& annotations) {
  if (annotations.empty()) throw NoAnnotations("no annotations to aggregate");
  std::map<std::string, std::pair<int, int>> counts;
  for (const Annotation& a : annotations) {
    auto& [target, total] = counts[a.item_id];
    if (a.label == Label::Target) ++target;
    ++total;
  }
  return counts;
}

}  // namespace

AggregatedLabels majority_vote(const std::vector<Annotation>& annotations) {
  AggregatedLabels out;
  for (const auto& [item, c] : tally(annotations)) {
    const auto [target, total] = c;
    // Strict majority for Target; ties fall to NonTarget.
    out.labels[item] =
        2 * target > total ? Label::Target : Label::NonTarget;
    out.confidence[item] = 1.0;
  }
  return out;
}

AggregatedLabels threshold_aggregate(const std::vector<Annotation>& annotations,
                                     int x) {
  if (x < 0) throw ConfigError("threshold must be >= 0");
  AggregatedLabels out;
  for (const auto& [item, c] : tally(annotations)) {
    out.labels[item] = c.first > x ? Label::Target : Label::NonTarget;
    out.confidence[item] = 1.0;
  }
  return out;
}

AggregatedLabels aggregate_two_step(const std::vector<Annotation>& annotations,
                                    StepOneMethod step1, StepTwoMethod step2,
                                    int threshold_x, const MaceOptions& mace) {
  if (annotations.empty()) throw NoAnnotations("no annotations to aggregate");

  std::map<std::string, std::vector<Annotation>> by_version;
  for (const Annotation& a : annotations)
    by_version[a.version_id].push_back(a);

  // Step 1: one aggregation per version. MACE is never fit across versions;
  // annotations are only exchangeable within a single rewritten version.
  std::map<std::string, std::vector<Label>> version_labels;  // per item
  for (const auto& [version_id, anns] : by_version) {
    AggregatedLabels step;
    if (step1 == StepOneMethod::MV) {
      step = majority_vote(anns);
    } else {
      MaceOptions per_version = mace;
      per_version.objective_trace = nullptr;
      step = mace_decode(mace_fit(anns, per_version), 1.0);
    }
    for (const auto& [item, label] : step.labels)
      version_labels[item].push_back(label);
  }

  // Step 2: combine the per-version labels per item.
  AggregatedLabels out;
  for (const auto& [item, labels] : version_labels) {
    const auto target = static_cast<int>(
        std::count(labels.begin(), labels.end(), Label::Target));
    const auto total = static_cast<int>(labels.size());
    if (step2 == StepTwoMethod::MV)
      out.labels[item] =
          2 * target > total ? Label::Target : Label::NonTarget;
    else
      out.labels[item] =
          target > threshold_x ? Label::Target : Label::NonTarget;
    out.confidence[item] = 1.0;
  }
  return out;
}

AggregatedLabels aggregate_by_name(const std::vector<Annotation>& annotations,
                                   const std::string& method,
                                   const MaceOptions& mace) {
  if (method == "mv") return majority_vote(annotations);
  if (method.rfind("t:", 0) == 0)
    return threshold_aggregate(annotations, std::stoi(method.substr(2)));
  if (method.size() >= 2 && method[0] == 't' &&
      std::all_of(method.begin() + 1, method.end(),
                  [](unsigned char c) { return std::isdigit(c); }))
    return threshold_aggregate(annotations, std::stoi(method.substr(1)));
  if (method == "mace") return mace_decode(mace_fit(annotations, mace), 1.0);
  if (method == "mv_mv")
    return aggregate_two_step(annotations, StepOneMethod::MV,
                              StepTwoMethod::MV, 0, mace);
  if (method == "mace_mv")
    return aggregate_two_step(annotations, StepOneMethod::MACE,
                              StepTwoMethod::MV, 0, mace);
  if (method == "mace_t0")
    return aggregate_two_step(annotations, StepOneMethod::MACE,
                              StepTwoMethod::Threshold, 0, mace);
  throw ConfigError("unknown aggregation method: " + method);
}

}  // namespace privtext
