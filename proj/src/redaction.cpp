// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/redaction.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

namespace privtext {

const char* placeholder_for(PiiCategory c) {
  switch (c) {
    case PiiCategory::Name:
      return "<NAME>";
    case PiiCategory::Location:
      return "<LOCATION>";
    case PiiCategory::Date:
      return "<DATE>";
    case PiiCategory::Time:
      return "<TIME>";
    case PiiCategory::Email:
      return "<EMAIL>";
    case PiiCategory::Phone:
      return "<PHONE>";
  }
  return "<NAME>";
}

Gazetteer load_gazetteer(const std::filesystem::path& path,
                         GazetteerKind kind) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gazetteer: " + path.string());
  Gazetteer g;
  g.kind = kind;
  std::string line;
  while (std::getline(in, line)) {
    TokenSeq entry = tokenize(line);
    if (entry.empty()) continue;
    if (entry.size() > 3)
      throw MalformedRecord("gazetteer entry longer than 3 tokens: " + line);
    g.entries.insert(std::move(entry));
  }
  return g;
}

namespace {

const std::array<const char*, 7> kWeekdays = {
    "monday", "tuesday", "wednesday", "thursday",
    "friday", "saturday", "sunday"};
const std::array<const char*, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

bool is_date_token(const std::string& t) {
  for (const char* d : kWeekdays)
    if (t == d) return true;
  for (const char* m : kMonths)
    if (t == m) return true;
  // ISO-like numeric forms: three 1..4-digit groups joined by / or -.
  static const std::regex numeric_date(
      R"(\d{1,4}[/-]\d{1,2}[/-]\d{1,4})");
  return std::regex_match(t, numeric_date);
}

bool is_time_token(const std::string& t) {
  if (t == "noon" || t == "midnight") return true;
  static const std::regex clock(R"(\d{1,2}:\d{2}(:\d{2})?(am|pm)?)");
  static const std::regex ampm(R"(\d{1,2}(am|pm))");
  return std::regex_match(t, clock) || std::regex_match(t, ampm);
}

bool is_email_token(const std::string& t) {
  static const std::regex email(
      R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)+)");
  return std::regex_match(t, email);
}

bool is_phone_token(const std::string& t) {
  std::size_t digits = 0;
  for (unsigned char c : t) {
    if (std::isdigit(c))
      ++digits;
    else if (c != '-' && c != '.' && c != '(' && c != ')' && c != '+')
      return false;
  }
  return digits >= 7;
}

std::optional<std::size_t> gazetteer_match_at(const TokenSeq& tokens,
                                              std::size_t pos,
                                              const Gazetteer& g,
                                              std::size_t length) {
  if (pos + length > tokens.size()) return std::nullopt;
  TokenSeq candidate(tokens.begin() + pos, tokens.begin() + pos + length);
  for (const std::string& t : candidate)
    if (is_placeholder(t)) return std::nullopt;
  if (g.entries.count(candidate)) return length;
  return std::nullopt;
}

}  // namespace

RedactionResult redact(const TokenSeq& tokens, const Gazetteer& names,
                       const Gazetteer& locations) {
  RedactionResult r;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::string& t = tokens[i];
    if (is_placeholder(t)) {
      r.tokens.push_back(t);
      ++i;
      continue;
    }

    std::optional<PiiCategory> category;
    std::size_t span = 1;
    // Longest match wins; on equal length Name beats Location beats the
    // single-token pattern categories.
    for (std::size_t len = 3; len >= 1 && !category; --len) {
      if (gazetteer_match_at(tokens, i, names, len)) {
        category = PiiCategory::Name;
        span = len;
      } else if (gazetteer_match_at(tokens, i, locations, len)) {
        category = PiiCategory::Location;
        span = len;
      }
    }
    if (!category) {
      if (is_email_token(t))
        category = PiiCategory::Email;
      else if (is_date_token(t))
        category = PiiCategory::Date;
      else if (is_time_token(t))
        category = PiiCategory::Time;
      else if (is_phone_token(t))
        category = PiiCategory::Phone;
    }

    if (category) {
      Replacement rep;
      rep.start = i;
      rep.length = span;
      rep.category = *category;
      rep.placeholder = placeholder_for(*category);
      r.tokens.push_back(rep.placeholder);
      r.replacements.push_back(std::move(rep));
      i += span;
    } else {
      r.tokens.push_back(t);
      ++i;
    }
  }
  return r;
}

std::pair<Corpus, std::unordered_map<std::string, RedactionResult>>
redact_corpus(const Corpus& c, const Gazetteer& names,
              const Gazetteer& locations) {
  Corpus out;
  out.name = c.name;
  out.target_class_name = c.target_class_name;
  std::unordered_map<std::string, RedactionResult> log;
  for (const DataPoint& p : c.points) {
    RedactionResult r = redact(p.tokens, names, locations);
    DataPoint q;
    q.id = p.id;
    q.tokens = r.tokens;
    q.raw_text = join_tokens(q.tokens);
    q.gold = p.gold;
    out.points.push_back(std::move(q));
    log.emplace(p.id, std::move(r));
  }
  return {std::move(out), std::move(log)};
}

}  // namespace privtext
