// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "privtext/errors.hpp"

namespace privtext {

enum class Label { Target, NonTarget };

inline const char* to_string(Label l) {
  return l == Label::Target ? "target" : "non_target";
}

// Parses "target" / "non_target"; throws UnknownLabel otherwise.
Label parse_label(const std::string& s);

using TokenSeq = std::vector<std::string>;

struct DataPoint {
  std::string id;
  std::string raw_text;
  TokenSeq tokens;  // always tokenize(raw_text)
  Label gold = Label::NonTarget;
};

struct Corpus {
  std::string name;
  std::string target_class_name;
  std::vector<DataPoint> points;

  std::size_t size() const { return points.size(); }
};

struct CorpusSplits {
  Corpus pretrain;
  Corpus validation;
  Corpus crowdsourcing;
};

enum class CorpusFormat { TSV, JSONL };

// Lowercases, splits on whitespace, strips leading/trailing punctuation per
// token. Placeholder tokens of the form <NAME> pass through intact.
TokenSeq tokenize(const std::string& raw_text);

// True for tokens shaped like <UPPERCASE> placeholders.
bool is_placeholder(const std::string& token);

// Joins tokens with single spaces (inverse of tokenize on its own output).
std::string join_tokens(const TokenSeq& tokens);

// TSV: id<TAB>label<TAB>text, no header. JSONL: {"id":..,"label":..,"text":..}
// per line. Label values: target / non_target.
Corpus ingest_corpus(const std::filesystem::path& path, CorpusFormat format);

// Seeded shuffle then cut. Pretrain/validation sizes are the rounded ratios;
// the remainder goes to the crowdsourcing split.
CorpusSplits split_corpus(const Corpus& c, double pretrain_ratio,
                          double validation_ratio, double crowdsourcing_ratio,
                          std::uint64_t seed);

}  // namespace privtext
