// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "privtext/corpus.hpp"

namespace privtext {

enum class GazetteerKind { Name, Location };

// Entity lists for rule-based PII matching. Entries are lowercase token
// sequences of one to three tokens.
struct Gazetteer {
  GazetteerKind kind = GazetteerKind::Name;
  std::set<TokenSeq> entries;
};

// One entry per line, lowercase, multi-token entries space-separated.
Gazetteer load_gazetteer(const std::filesystem::path& path,
                         GazetteerKind kind);

enum class PiiCategory { Name, Location, Date, Time, Email, Phone };

const char* placeholder_for(PiiCategory c);

struct Replacement {
  std::size_t start = 0;   // index into the input token sequence
  std::size_t length = 0;  // number of input tokens consumed
  PiiCategory category = PiiCategory::Name;
  std::string placeholder;
};

struct RedactionResult {
  TokenSeq tokens;
  std::vector<Replacement> replacements;  // sorted, non-overlapping
};

// Left-to-right scan, longest match first; on equal length Name beats
// Location beats the single-token patterns. Matched spans collapse to one
// placeholder token. Existing placeholders pass through unchanged, so the
// operation is idempotent.
RedactionResult redact(const TokenSeq& tokens, const Gazetteer& names,
                       const Gazetteer& locations);

// Applies redact to every point; gold labels and ids are preserved.
std::pair<Corpus, std::unordered_map<std::string, RedactionResult>>
redact_corpus(const Corpus& c, const Gazetteer& names,
              const Gazetteer& locations);

}  // namespace privtext
