// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/annotation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "privtext/rng.hpp"

namespace privtext {

void WorkerProfile::validate() const {
  if (worker_id.empty()) throw ConfigError("worker id must be non-empty");
  if (competence < 0 || competence > 1)
    throw ConfigError("worker competence must lie in [0, 1]");
  if (spam_target_prob < 0 || spam_target_prob > 1)
    throw ConfigError("spam probability must lie in [0, 1]");
}

Label perceive_label(const TokenSeq& tokens, const TaskLexicon& lexicon) {
  const bool hit = lexicon.matches(tokens);
  if (lexicon.mode == LexiconMode::PresenceImpliesTarget)
    return hit ? Label::Target : Label::NonTarget;
  return hit ? Label::NonTarget : Label::Target;
}

std::vector<Annotation> simulate_annotations(
    const std::vector<RewrittenVersion>& versions,
    const std::vector<WorkerProfile>& workers, int per_version,
    const TaskLexicon& lexicon, std::uint64_t seed) {
  if (per_version < 1) throw ConfigError("per_version must be >= 1");
  if (static_cast<std::size_t>(per_version) > workers.size())
    throw TooFewWorkers("need " + std::to_string(per_version) +
                        " workers per version, have " +
                        std::to_string(workers.size()));
  for (const WorkerProfile& w : workers) w.validate();

  std::vector<Annotation> out;
  for (const RewrittenVersion& v : versions) {
    for (const auto& [item_id, tokens] : v.items) {
      // Seed depends only on ids, never on the version's text or iteration
      // order, so annotations on one version are unaffected by edits to
      // another.
      const std::uint64_t cell_seed = mix_seed(
          seed, mix_seed(fnv1a(item_id), fnv1a(v.version_id)));
      SplitMix64 rng(cell_seed);

      std::vector<std::size_t> order(workers.size());
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);

      const Label perceived = perceive_label(tokens, lexicon);
      for (int a = 0; a < per_version; ++a) {
        const WorkerProfile& w = workers[order[static_cast<std::size_t>(a)]];
        SplitMix64 draw(mix_seed(cell_seed, fnv1a(w.worker_id)));
        Label reported;
        if (draw.next_uniform() < w.competence)
          reported = perceived;
        else
          reported = draw.next_uniform() < w.spam_target_prob
                         ? Label::Target
                         : Label::NonTarget;
        out.push_back({item_id, v.version_id, w.worker_id, reported});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Annotation& a,
                                       const Annotation& b) {
    return std::tie(a.item_id, a.version_id, a.worker_id) <
           std::tie(b.item_id, b.version_id, b.worker_id);
  });
  return out;
}

void export_hits(const std::vector<RewrittenVersion>& versions,
                 const std::filesystem::path& path) {
  if (versions.empty()) throw EmptyInput("no versions to export");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write HIT batch: " + path.string());
  for (const RewrittenVersion& v : versions) {
    for (const auto& [item_id, tokens] : v.items) {
      nlohmann::json j;
      j["item_id"] = item_id;
      j["version_id"] = v.version_id;
      j["text"] = join_tokens(tokens);
      out << j.dump() << '\n';
    }
  }
}

std::vector<Annotation> import_annotations(
    const std::filesystem::path& path,
    const std::vector<RewrittenVersion>& known_items) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open annotation file: " + path.string());

  std::set<std::pair<std::string, std::string>> known;
  for (const RewrittenVersion& v : known_items)
    for (const auto& [item_id, tokens] : v.items)
      known.emplace(item_id, v.version_id);

  std::vector<Annotation> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("item_id") ||
        !j.contains("version_id") || !j.contains("worker_id") ||
        !j.contains("label"))
      throw MalformedAnnotationFile("bad annotation record at line " +
                                    std::to_string(line_no));
    Annotation a;
    a.item_id = j["item_id"].get<std::string>();
    a.version_id = j["version_id"].get<std::string>();
    a.worker_id = j["worker_id"].get<std::string>();
    try {
      a.label = parse_label(j["label"].get<std::string>());
    } catch (const UnknownLabel&) {
      throw MalformedAnnotationFile("unknown label at line " +
                                    std::to_string(line_no));
    }
    if (!known.count({a.item_id, a.version_id}))
      throw UnknownItemId("annotation for unknown item \"" + a.item_id +
                          "\" / version \"" + a.version_id + "\" at line " +
                          std::to_string(line_no));
    if (!seen.insert({a.item_id, a.version_id, a.worker_id}).second)
      throw MalformedAnnotationFile(
          "duplicate (item, version, worker) at line " +
          std::to_string(line_no));
    out.push_back(std::move(a));
  }
  return out;
}

void write_annotations(const std::vector<Annotation>& annotations,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write annotation file: " + path.string());
  for (const Annotation& a : annotations) {
    nlohmann::json j;
    j["item_id"] = a.item_id;
    j["version_id"] = a.version_id;
    j["worker_id"] = a.worker_id;
    j["label"] = to_string(a.label);
    out << j.dump() << '\n';
  }
}

}  // namespace privtext
