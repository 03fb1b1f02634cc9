// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "privtext/annotation.hpp"

using namespace privtext;

namespace {

TaskLexicon atis_like() {
  TaskLexicon lex;
  lex.mode = LexiconMode::PresenceImpliesTarget;
  for (const char* w : {"airfare", "cheapest", "cost", "fare", "fares",
                        "price"})
    lex.entries.insert(TokenSeq{w});
  lex.entries.insert(TokenSeq{"how", "much"});
  return lex;
}

std::vector<RewrittenVersion> two_versions() {
  RewrittenVersion v0{"v0",
                      {{"i1", {"how", "much", "is", "the", "fare"}},
                       {"i2", {"show", "me", "the", "flights"}}}};
  RewrittenVersion v1{"v1",
                      {{"i1", {"what", "flights", "leave", "today"}},
                       {"i2", {"price", "of", "a", "ticket"}}}};
  return {v0, v1};
}

std::vector<WorkerProfile> uniform_workers(int n, double competence,
                                           double spam_target) {
  std::vector<WorkerProfile> out;
  for (int i = 0; i < n; ++i)
    out.push_back({"w" + std::to_string(i), competence, spam_target});
  return out;
}

}  // namespace

TEST_CASE("perceive_label target mode") {
  const TaskLexicon lex = atis_like();
  CHECK(perceive_label({"how", "much", "is", "the", "cheapest", "flight"},
                       lex) == Label::Target);
  CHECK(perceive_label({"play", "some", "jazz"}, lex) == Label::NonTarget);
  // "how" and "much" must be adjacent
  CHECK(perceive_label({"how", "long", "is", "it"}, lex) ==
        Label::NonTarget);
}

TEST_CASE("perceive_label non-target mode") {
  TaskLexicon ta;
  ta.mode = LexiconMode::PresenceImpliesNonTarget;
  ta.entries.insert(TokenSeq{"worst"});
  CHECK(perceive_label({"worst", "hotel", "in", "<LOCATION>"}, ta) ==
        Label::NonTarget);
  CHECK(perceive_label({"best", "hotel", "in", "town"}, ta) ==
        Label::Target);
}

TEST_CASE("simulate_annotations degenerate competence") {
  const auto versions = two_versions();
  const TaskLexicon lex = atis_like();

  // perfect workers reproduce the perceived label
  const auto perfect = simulate_annotations(
      versions, uniform_workers(5, 1.0, 0.5), 3, lex, 9);
  CHECK(perfect.size() == 2 * 2 * 3);
  for (const Annotation& a : perfect) {
    const auto& v = a.version_id == "v0" ? versions[0] : versions[1];
    CHECK(a.label == perceive_label(v.items.at(a.item_id), lex));
  }

  // pure spammers with spam_dist (1, 0) always say Target
  const auto spam = simulate_annotations(
      versions, uniform_workers(5, 0.0, 1.0), 3, lex, 9);
  for (const Annotation& a : spam) CHECK(a.label == Label::Target);
}

TEST_CASE("simulate_annotations determinism and worker distinctness") {
  const auto versions = two_versions();
  const TaskLexicon lex = atis_like();
  const auto a = simulate_annotations(versions, uniform_workers(5, 0.8, 0.5),
                                      3, lex, 11);
  const auto b = simulate_annotations(versions, uniform_workers(5, 0.8, 0.5),
                                      3, lex, 11);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].worker_id == b[i].worker_id);
    CHECK(a[i].label == b[i].label);
  }
  // per (item, version): distinct workers
  std::map<std::pair<std::string, std::string>, std::set<std::string>> seen;
  for (const Annotation& ann : a)
    CHECK(seen[{ann.item_id, ann.version_id}].insert(ann.worker_id).second);
}

TEST_CASE("simulate_annotations independent across versions") {
  auto versions = two_versions();
  const TaskLexicon lex = atis_like();
  const auto before = simulate_annotations(
      versions, uniform_workers(5, 0.7, 0.4), 3, lex, 21);

  versions[1].items["i1"] = {"totally", "different", "text", "fare"};
  const auto after = simulate_annotations(
      versions, uniform_workers(5, 0.7, 0.4), 3, lex, 21);

  // annotations for v0 are bit-identical
  std::vector<Annotation> v0_before, v0_after;
  for (const Annotation& a : before)
    if (a.version_id == "v0") v0_before.push_back(a);
  for (const Annotation& a : after)
    if (a.version_id == "v0") v0_after.push_back(a);
  REQUIRE(v0_before.size() == v0_after.size());
  for (std::size_t i = 0; i < v0_before.size(); ++i) {
    CHECK(v0_before[i].worker_id == v0_after[i].worker_id);
    CHECK(v0_before[i].label == v0_after[i].label);
  }
}

TEST_CASE("simulate_annotations marginal correctness Monte Carlo") {
  // P(report == perceived) should be c + (1-c) * s(perceived).
  const double competence = 0.6, spam_target = 0.3;
  const TaskLexicon lex = atis_like();
  // single worker, always chosen; many items with a Target-perceived text
  std::vector<RewrittenVersion> versions(1);
  versions[0].version_id = "v0";
  for (int i = 0; i < 20000; ++i)
    versions[0].items["i" + std::to_string(i)] = {"the", "fare", "please"};
  const auto anns = simulate_annotations(
      versions, uniform_workers(1, competence, spam_target), 1, lex, 33);
  REQUIRE(anns.size() == 20000);
  double agree = 0;
  for (const Annotation& a : anns)
    if (a.label == Label::Target) agree += 1;
  const double expected = competence + (1 - competence) * spam_target;
  CHECK(agree / 20000 == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("simulate_annotations rejects too few workers") {
  CHECK_THROWS_AS(
      simulate_annotations(two_versions(), uniform_workers(2, 0.8, 0.5), 3,
                           atis_like(), 1),
      TooFewWorkers);
}

TEST_CASE("export/import round trip") {
  const auto versions = two_versions();
  const auto dir = std::filesystem::temp_directory_path();
  const auto hits_path = dir / "privtext_hits_test.jsonl";
  const auto ann_path = dir / "privtext_ann_test.jsonl";

  export_hits(versions, hits_path);

  // the HIT file never leaks a label field
  {
    std::ifstream in(hits_path);
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("label") == std::string::npos);
    CHECK(all.find("gold") == std::string::npos);
  }

  const auto anns = simulate_annotations(
      versions, uniform_workers(3, 1.0, 0.5), 2, atis_like(), 5);
  write_annotations(anns, ann_path);
  const auto imported = import_annotations(ann_path, versions);
  REQUIRE(imported.size() == anns.size());
  for (std::size_t i = 0; i < anns.size(); ++i) {
    CHECK(imported[i].item_id == anns[i].item_id);
    CHECK(imported[i].version_id == anns[i].version_id);
    CHECK(imported[i].worker_id == anns[i].worker_id);
    CHECK(imported[i].label == anns[i].label);
  }
  std::filesystem::remove(hits_path);
  std::filesystem::remove(ann_path);
}

TEST_CASE("import_annotations rejects unknown items and bad files") {
  const auto versions = two_versions();
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "privtext_bad_ann_test.jsonl";
  {
    std::ofstream out(path);
    out << R"({"item_id":"nope","version_id":"v0","worker_id":"w0",)"
        << R"("label":"target"})" << '\n';
  }
  CHECK_THROWS_AS(import_annotations(path, versions), UnknownItemId);
  {
    std::ofstream out(path);
    out << "not json at all\n";
  }
  CHECK_THROWS_AS(import_annotations(path, versions),
                  MalformedAnnotationFile);
  std::filesystem::remove(path);
}

TEST_CASE("import_annotations golden three item file") {
  RewrittenVersion v{"v0",
                     {{"a", {"x"}}, {"b", {"y"}}, {"c", {"z"}}}};
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "privtext_golden_ann.jsonl";
  {
    std::ofstream out(path);
    out << R"({"item_id":"a","version_id":"v0","worker_id":"w1","label":"target"})"
        << '\n'
        << R"({"item_id":"b","version_id":"v0","worker_id":"w1","label":"non_target"})"
        << '\n'
        << R"({"item_id":"c","version_id":"v0","worker_id":"w2","label":"target"})"
        << '\n';
  }
  const auto anns = import_annotations(path, {v});
  REQUIRE(anns.size() == 3);
  CHECK(anns[0].item_id == "a");
  CHECK(anns[0].label == Label::Target);
  CHECK(anns[1].label == Label::NonTarget);
  CHECK(anns[2].worker_id == "w2");
  std::filesystem::remove(path);
}
