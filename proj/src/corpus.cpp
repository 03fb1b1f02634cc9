// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "privtext/rng.hpp"

namespace privtext {

Label parse_label(const std::string& s) {
  if (s == "target") return Label::Target;
  if (s == "non_target") return Label::NonTarget;
  throw UnknownLabel("unknown label value: \"" + s + "\"");
}

bool is_placeholder(const std::string& token) {
  if (token.size() < 3 || token.front() != '<' || token.back() != '>')
    return false;
  return std::all_of(token.begin() + 1, token.end() - 1, [](unsigned char c) {
    return std::isupper(c) || c == '_';
  });
}

namespace {

bool is_strippable(unsigned char c) {
  return std::ispunct(c);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

TokenSeq tokenize(const std::string& raw_text) {
  TokenSeq out;
  std::istringstream in(raw_text);
  std::string word;
  while (in >> word) {
    if (is_placeholder(word)) {
      out.push_back(word);
      continue;
    }
    std::size_t b = 0, e = word.size();
    while (b < e && is_strippable(word[b])) ++b;
    while (e > b && is_strippable(word[e - 1])) --e;
    if (b == e) continue;
    out.push_back(lowercase(word.substr(b, e - b)));
  }
  return out;
}

std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

namespace {

void append_point(Corpus& c, std::unordered_set<std::string>& seen,
                  std::string id, std::string label, std::string text,
                  std::size_t line_no) {
  if (!seen.insert(id).second)
    throw DuplicateId("duplicate id \"" + id + "\" at line " +
                      std::to_string(line_no));
  DataPoint p;
  p.id = std::move(id);
  p.raw_text = std::move(text);
  p.tokens = tokenize(p.raw_text);
  p.gold = parse_label(label);
  if (p.tokens.empty())
    throw MalformedRecord("empty text (no tokens) at line " +
                          std::to_string(line_no));
  c.points.push_back(std::move(p));
}

}  // namespace

Corpus ingest_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open corpus file: " + path.string());

  Corpus c;
  c.name = path.stem().string();
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (format == CorpusFormat::TSV) {
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t1 == std::string::npos || t2 == std::string::npos)
        throw MalformedRecord("expected id<TAB>label<TAB>text at line " +
                              std::to_string(line_no));
      append_point(c, seen, line.substr(0, t1),
                   line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1),
                   line_no);
    } else {
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
          !j.contains("label") || !j.contains("text"))
        throw MalformedRecord("bad JSONL record at line " +
                              std::to_string(line_no));
      append_point(c, seen, j["id"].get<std::string>(),
                   j["label"].get<std::string>(), j["text"].get<std::string>(),
                   line_no);
    }
  }
  if (c.points.empty())
    throw DataError("corpus file has no records: " + path.string());
  return c;
}

CorpusSplits split_corpus(const Corpus& c, double pretrain_ratio,
                          double validation_ratio, double crowdsourcing_ratio,
                          std::uint64_t seed) {
  if (pretrain_ratio <= 0 || validation_ratio <= 0 || crowdsourcing_ratio <= 0)
    throw ConfigError("split ratios must be positive");
  const double sum = pretrain_ratio + validation_ratio + crowdsourcing_ratio;
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");

  const std::size_t n = c.points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(mix_seed(seed, fnv1a("split_corpus")));
  // Fisher-Yates with our own stream: std::shuffle is not cross-platform
  // deterministic.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(order[i - 1], order[j]);
  }

  const auto n_pre = static_cast<std::size_t>(
      std::llround(pretrain_ratio * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(
      std::llround(validation_ratio * static_cast<double>(n)));
  if (n_pre == 0 || n_val == 0 || n_pre + n_val >= n)
    throw EmptySplit("split ratios leave an empty split for corpus of size " +
                     std::to_string(n));

  CorpusSplits s;
  for (Corpus* part : {&s.pretrain, &s.validation, &s.crowdsourcing}) {
    part->name = c.name;
    part->target_class_name = c.target_class_name;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const DataPoint& p = c.points[order[i]];
    if (i < n_pre)
      s.pretrain.points.push_back(p);
    else if (i < n_pre + n_val)
      s.validation.points.push_back(p);
    else
      s.crowdsourcing.points.push_back(p);
  }
  return s;
}

}  // namespace privtext
