// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "privtext/corpus.hpp"
#include "privtext/lexicon.hpp"

namespace privtext {

// Generative annotator: with probability `competence` the worker reports the
// label it perceives from the text, otherwise it draws from its personal
// spam distribution.
struct WorkerProfile {
  std::string worker_id;
  double competence = 0.8;        // in [0, 1]
  double spam_target_prob = 0.5;  // spam draw: P(Target); P(NonTarget) = 1-p

  void validate() const;
};

struct Annotation {
  std::string item_id;
  std::string version_id;
  std::string worker_id;
  Label label = Label::NonTarget;
};

// One rewritten version of the crowdsourcing items, keyed by item id.
struct RewrittenVersion {
  std::string version_id;
  std::map<std::string, TokenSeq> items;
};

// The indicator-word proxy for human perception: presence of any lexicon
// entry decides the class per the lexicon mode.
Label perceive_label(const TokenSeq& tokens, const TaskLexicon& lexicon);

// For each (item, version), `per_version` distinct workers are drawn by
// seeded sampling; each reports per the generative model above. Output is
// sorted by (item, version, worker) and independent of input order.
std::vector<Annotation> simulate_annotations(
    const std::vector<RewrittenVersion>& versions,
    const std::vector<WorkerProfile>& workers, int per_version,
    const TaskLexicon& lexicon, std::uint64_t seed);

// HIT batch JSONL: item_id, version_id, text. Gold labels are never written.
void export_hits(const std::vector<RewrittenVersion>& versions,
                 const std::filesystem::path& path);

// Annotation JSONL: item_id, version_id, worker_id, label. `known_items`
// guards against answers for items that were never exported.
std::vector<Annotation> import_annotations(
    const std::filesystem::path& path,
    const std::vector<RewrittenVersion>& known_items);

void write_annotations(const std::vector<Annotation>& annotations,
                       const std::filesystem::path& path);

}  // namespace privtext
