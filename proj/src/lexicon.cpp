// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace privtext {

namespace {

bool entry_at(const TokenSeq& tokens, std::size_t pos, const TokenSeq& entry) {
  if (pos + entry.size() > tokens.size()) return false;
  return std::equal(entry.begin(), entry.end(), tokens.begin() + pos);
}

}  // namespace

bool TaskLexicon::matches(const TokenSeq& tokens) const {
  for (std::size_t i = 0; i < tokens.size(); ++i)
    for (const TokenSeq& e : entries)
      if (entry_at(tokens, i, e)) return true;
  return false;
}

std::size_t TaskLexicon::count_occurrences(const TokenSeq& tokens) const {
  // Longest entry first so "how much" is one hit, not two misses.
  std::vector<const TokenSeq*> by_len;
  by_len.reserve(entries.size());
  for (const TokenSeq& e : entries) by_len.push_back(&e);
  std::sort(by_len.begin(), by_len.end(),
            [](const TokenSeq* a, const TokenSeq* b) {
              if (a->size() != b->size()) return a->size() > b->size();
              return *a < *b;
            });

  std::size_t count = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t advance = 1;
    for (const TokenSeq* e : by_len) {
      if (entry_at(tokens, i, *e)) {
        ++count;
        advance = e->size();
        break;
      }
    }
    i += advance;
  }
  return count;
}

std::set<std::string> filter_sentiment_lexicon(
    const std::vector<SentimentEntry>& entries) {
  std::set<std::string> kept;
  for (const SentimentEntry& e : entries) {
    const double lo = e.mean_polarity - 2.0 * e.std_dev;
    const double hi = e.mean_polarity + 2.0 * e.std_dev;
    const bool stable = (lo > 0 && hi > 0) || (lo < 0 && hi < 0);
    if (e.mean_polarity != 0 && stable) {
      std::string w = e.word;
      std::transform(w.begin(), w.end(), w.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      kept.insert(std::move(w));
    }
  }
  return kept;
}

std::vector<SentimentEntry> load_sentiment_lexicon(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sentiment lexicon: " + path.string());
  std::vector<SentimentEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    SentimentEntry e;
    if (!(row >> e.word >> e.mean_polarity >> e.std_dev) || e.std_dev < 0)
      throw MalformedRecord("bad sentiment lexicon line " +
                            std::to_string(line_no));
    out.push_back(std::move(e));
  }
  return out;
}

std::map<std::string, TaskLexicon> builtin_lexicons(
    const std::optional<std::filesystem::path>& ta_sentiment_file) {
  std::map<std::string, TaskLexicon> out;

  TaskLexicon atis;
  atis.mode = LexiconMode::PresenceImpliesTarget;
  for (const char* w :
       {"airfare", "cheapest", "cost", "fare", "fares", "price"})
    atis.entries.insert(TokenSeq{w});
  atis.entries.insert(TokenSeq{"how", "much"});
  out.emplace("atis", std::move(atis));

  TaskLexicon snips;
  snips.mode = LexiconMode::PresenceImpliesTarget;
  snips.entries.insert(TokenSeq{"add"});
  snips.entries.insert(TokenSeq{"playlist"});
  out.emplace("snips", std::move(snips));

  if (ta_sentiment_file) {
    TaskLexicon ta;
    ta.mode = LexiconMode::PresenceImpliesNonTarget;
    for (const std::string& w : filter_sentiment_lexicon(
             load_sentiment_lexicon(*ta_sentiment_file)))
      ta.entries.insert(TokenSeq{w});
    out.emplace("ta", std::move(ta));
  }
  return out;
}

TaskLexicon builtin_lexicon(
    const std::string& corpus_name,
    const std::optional<std::filesystem::path>& ta_sentiment_file) {
  std::string name = corpus_name;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (name == "ta" && !ta_sentiment_file)
    throw MissingLexiconFile(
        "the ta lexicon requires a sentiment lexicon file");
  const auto all = builtin_lexicons(ta_sentiment_file);
  const auto it = all.find(name);
  if (it == all.end())
    throw ConfigError("no built-in lexicon for corpus \"" + corpus_name +
                      "\"");
  return it->second;
}

}  // namespace privtext
