// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "privtext/corpus.hpp"

namespace privtext {

// Task lexicons map the presence of indicator words/phrases to a class.
// For ATIS/SNIPS-style tasks presence implies the target class; for
// sentiment-style tasks presence of a negative word implies the non-target
// class.
enum class LexiconMode { PresenceImpliesTarget, PresenceImpliesNonTarget };

struct TaskLexicon {
  LexiconMode mode = LexiconMode::PresenceImpliesTarget;
  std::set<TokenSeq> entries;  // 1..3 lowercase tokens each

  // True iff any entry occurs as a contiguous subsequence of tokens.
  bool matches(const TokenSeq& tokens) const;

  // Total non-overlapping left-to-right occurrences of entries in tokens,
  // longest entry first at each position.
  std::size_t count_occurrences(const TokenSeq& tokens) const;
};

struct SentimentEntry {
  std::string word;
  double mean_polarity = 0;
  double std_dev = 0;
};

// Keeps a word iff its polarity sign is stable under +/- two standard
// deviations (both shifted values strictly on the same side of zero).
std::set<std::string> filter_sentiment_lexicon(
    const std::vector<SentimentEntry>& entries);

// Lines: word<TAB>mean<TAB>std_dev.
std::vector<SentimentEntry> load_sentiment_lexicon(
    const std::filesystem::path& path);

// Built-in lexicons for the named corpora. "ta" requires a sentiment
// lexicon file; throws MissingLexiconFile without one.
std::map<std::string, TaskLexicon> builtin_lexicons(
    const std::optional<std::filesystem::path>& ta_sentiment_file);

// Lookup into builtin_lexicons by corpus name (case-insensitive). Throws
// MissingLexiconFile for "ta" without a file, ConfigError for unknown names.
TaskLexicon builtin_lexicon(
    const std::string& corpus_name,
    const std::optional<std::filesystem::path>& ta_sentiment_file);

}  // namespace privtext
