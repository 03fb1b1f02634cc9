// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mace_reference.hpp"
#include "privtext/aggregation.hpp"
#include "privtext/annotation.hpp"
#include "privtext/evaluation.hpp"
#include "privtext/experiment.hpp"
#include "privtext/lexicon.hpp"
#include "privtext/mace.hpp"
#include "privtext/noise.hpp"
#include "privtext/pipeline.hpp"
#include "privtext/rewrite.hpp"

using namespace privtext;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail) {
  std::printf("%s: criterion %d (%s)%s%s\n", ok ? "PASS" : "FAIL", number,
              name, detail.empty() ? "" : " - ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- criterion 1

void criterion_1() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  int patterns = 0;
  double max_err = 0;
  bool monotone = true;

  // All label assignments for 1 and 2 items x 3 workers, plus a strided
  // sample of the 4-item instances: 8 + 64 + 16 patterns.
  std::vector<std::pair<int, unsigned>> cases;
  for (unsigned p = 0; p < 8; ++p) cases.emplace_back(1, p);
  for (unsigned p = 0; p < 64; ++p) cases.emplace_back(2, p);
  for (unsigned p = 0; p < 4096; p += 256) cases.emplace_back(4, p);

  for (const auto& [n_items, pattern] : cases) {
    std::vector<Annotation> anns;
    unsigned bits = pattern;
    for (int i = 0; i < n_items; ++i)
      for (int w = 0; w < 3; ++w) {
        anns.push_back({"i" + std::to_string(i), "v0",
                        "w" + std::to_string(w),
                        bits & 1u ? Label::Target : Label::NonTarget});
        bits >>= 1;
      }
    std::vector<std::vector<double>> trace;
    MaceOptions opt{20, 0.5, 3, static_cast<std::uint64_t>(pattern)};
    opt.objective_trace = &trace;
    const MaceModel model = mace_fit(anns, opt);
    const auto ref = testing::ref_mace_fit(anns, 20, 0.5, 3,
                                           static_cast<std::uint64_t>(pattern));
    for (const auto& [item, post] : model.posteriors)
      for (int t = 0; t < 2; ++t)
        max_err = std::max(
            max_err,
            std::abs(post[static_cast<std::size_t>(t)] -
                     ref.posterior.at(item)[static_cast<std::size_t>(t)]));
    for (const auto& run : trace)
      for (std::size_t k = 1; k < run.size(); ++k)
        if (run[k] < run[k - 1] - 1e-9) monotone = false;
    ++patterns;
  }

  const double seconds =
      std::chrono::duration<double>(clock::now() - start).count();
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d patterns, max posterior error %.2e, monotone=%s, %.2fs",
                patterns, max_err, monotone ? "yes" : "no", seconds);
  report(1, "EM oracle equivalence",
         patterns >= 50 && max_err <= 1e-6 && monotone && seconds < 5.0,
         detail);
}

// ---------------------------------------------------------------- criterion 2

std::vector<Annotation> vote_multiset(int n_target, int n_total) {
  std::vector<Annotation> anns;
  for (int i = 0; i < n_total; ++i)
    anns.push_back({"i", "v0", "w" + std::to_string(i),
                    i < n_target ? Label::Target : Label::NonTarget});
  return anns;
}

void criterion_2() {
  bool ok = true;
  std::string detail;

  // worked examples: x = 3 with 4 T / 5 N -> Target, 3 T / 6 N -> NonTarget
  if (threshold_aggregate(vote_multiset(4, 9), 3).labels.at("i") !=
      Label::Target) {
    ok = false;
    detail = "x=3 with 4T/5N did not yield Target";
  }
  if (threshold_aggregate(vote_multiset(3, 9), 3).labels.at("i") !=
      Label::NonTarget) {
    ok = false;
    detail = "x=3 with 3T/6N did not yield NonTarget";
  }

  // nesting S(t0) >= S(t1) >= S(t2) over every multiset of size <= 9
  for (int n = 1; n <= 9 && ok; ++n)
    for (int t = 0; t <= n && ok; ++t)
      for (int x = 0; x < 2 && ok; ++x) {
        const bool lo = threshold_aggregate(vote_multiset(t, n), x)
                            .labels.at("i") == Label::Target;
        const bool hi = threshold_aggregate(vote_multiset(t, n), x + 1)
                            .labels.at("i") == Label::Target;
        if (hi && !lo) {
          ok = false;
          detail = "nesting violated at n=" + std::to_string(n) +
                   " t=" + std::to_string(t) + " x=" + std::to_string(x);
        }
      }
  if (ok) detail = "worked examples and nesting over all multisets <= 9";
  report(2, "threshold semantics", ok, detail);
}

// ---------------------------------------------------------------- criterion 3

void criterion_3() {
  const double delta = 1e-4, sensitivity = 2.0;
  const std::vector<double> epsilons = {0.5, 1, 10, 100, 3333, 10000};

  bool ok = true;
  double max_residual = 0, prev_sigma = 1e300, sigma_at_1 = 0;
  for (double eps : epsilons) {
    PrivacyParams p;
    p.epsilon = eps;
    p.delta = delta;
    const double sigma = calibrate_noise(p, sensitivity);
    max_residual =
        std::max(max_residual,
                 std::abs(gaussian_mechanism_delta(eps, sensitivity, sigma) -
                          delta));
    if (!(sigma < prev_sigma)) ok = false;
    prev_sigma = sigma;
    if (eps == 1) sigma_at_1 = sigma;
  }
  if (max_residual > 1e-10) ok = false;

  // classic Gaussian mechanism closed form at eps = 1
  const double classic = std::sqrt(2.0 * std::log(1.25 / delta)) *
                         sensitivity / 1.0;
  if (std::abs(classic - 8.6872) > 1e-3) ok = false;
  if (!(sigma_at_1 <= classic)) ok = false;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "max residual %.2e, sigma(1)=%.4f <= classic %.4f, "
                "strictly decreasing",
                max_residual, sigma_at_1, classic);
  report(3, "noise calibration", ok, detail);
}

// ---------------------------------------------------------------- criterion 4

void criterion_4() {
  // pretraining corpus with a 10:1 frequency pair
  Corpus pre;
  const auto add = [&pre](const std::string& id, const std::string& text) {
    DataPoint p;
    p.id = id;
    p.tokens = tokenize(text);
    p.gold = Label::NonTarget;
    pre.points.push_back(std::move(p));
  };
  for (int i = 0; i < 100; ++i)
    add("f" + std::to_string(i), "the ubiquitous bird sang a song");
  for (int i = 0; i < 10; ++i)
    add("r" + std::to_string(i), "the scarce bird sang a song");
  for (int i = 0; i < 40; ++i)
    add("x" + std::to_string(i), "a quiet song in the garden");
  const Codec codec = Codec::fit(pre, 17, 2);

  const TokenSeq sentence = tokenize("the ubiquitous and scarce bird");
  int frequent = 0, rare = 0;
  for (int i = 0; i < 1000; ++i) {
    const TokenSeq out =
        rewrite_with_scale(codec, sentence, NoiseFamily::Gaussian, 1.0, 0.25,
                           static_cast<std::uint64_t>(1000 + i));
    frequent += std::count(out.begin(), out.end(), "ubiquitous") > 0;
    rare += std::count(out.begin(), out.end(), "scarce") > 0;
  }
  const double diff = (frequent - rare) / 1000.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "survival frequent %.1f%% vs rare %.1f%% (margin %.1fpp)",
                frequent / 10.0, rare / 10.0, diff * 100);
  report(4, "rare-word fragility", diff >= 0.05, detail);
}

// ---------------------------------------------------------------- criterion 5

void criterion_5(const fs::path& fixtures) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  const Corpus corpus =
      ingest_corpus(fixtures / "synth.tsv", CorpusFormat::TSV);
  const CorpusSplits splits = split_corpus(corpus, 0.7, 0.1, 0.2, 1);
  const Gazetteer names =
      load_gazetteer(fixtures / "names.txt", GazetteerKind::Name);
  const Gazetteer locations =
      load_gazetteer(fixtures / "locations.txt", GazetteerKind::Location);
  const PipelineCodecs codecs{
      Codec::fit(splits.pretrain, 17, 2),
      Codec::fit(redact_corpus(splits.pretrain, names, locations).first, 17,
                 2)};
  const TaskLexicon lexicon = builtin_lexicon("atis", std::nullopt);

  // High/low budget analogs for this low-dimensional codec: the published
  // budgets sit in a regime where this codec's noise is already negligible,
  // so the pair is scaled down while keeping hi >> lo.
  const double eps_hi = 100, eps_lo = 20;
  const auto arm_f1 = [&](PipelineKind kind, double eps) {
    PrivacyParams p;
    p.epsilon = eps;
    p.delta = 1e-4;
    p.clip_bound = 1.0;
    const RewrittenDataset d =
        run_pipeline(splits, kind, codecs, names, locations, p, 3);
    AggregatedLabels pred;
    for (const auto& [id, tokens] : d.items)
      pred.labels[id] = perceive_label(tokens, lexicon);
    return f1_score(pred, splits.crowdsourcing).f1;
  };

  const double pii = arm_f1(PipelineKind::PiiOnly, eps_hi);
  const double dp_hi = arm_f1(PipelineKind::DpOnly, eps_hi);
  const double dp_lo = arm_f1(PipelineKind::DpOnly, eps_lo);
  const double both_hi = arm_f1(PipelineKind::PiiPlusDp, eps_hi);
  const double seconds =
      std::chrono::duration<double>(clock::now() - start).count();

  const bool ok = pii > dp_hi && dp_hi > both_hi && dp_hi > dp_lo &&
                  seconds < 60.0;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "pii=%.3f > dp(hi)=%.3f > pii+dp(hi)=%.3f; dp(hi) > "
                "dp(lo)=%.3f; %.1fs",
                pii, dp_hi, both_hi, dp_lo, seconds);
  report(5, "privacy-utility trend", ok, detail);
}

// ---------------------------------------------------------------- criterion 6

void criterion_6() {
  TaskLexicon lexicon;
  lexicon.mode = LexiconMode::PresenceImpliesTarget;
  lexicon.entries.insert(TokenSeq{"fare"});

  Corpus gold;
  std::vector<RewrittenVersion> versions(3);
  for (int v = 0; v < 3; ++v) versions[v].version_id = "v" + std::to_string(v);
  for (int i = 0; i < 60; ++i) {
    DataPoint p;
    p.id = "i" + std::to_string(i);
    p.gold = i % 2 ? Label::Target : Label::NonTarget;
    p.tokens = p.gold == Label::Target ? tokenize("fare to boston")
                                       : tokenize("flights to boston");
    for (auto& v : versions) v.items[p.id] = p.tokens;
    gold.points.push_back(std::move(p));
  }

  // Low competence plus a spam distribution that almost never says Target:
  // the dominant error mode is missing the target class.
  std::vector<WorkerProfile> workers;
  for (int w = 0; w < 5; ++w)
    workers.push_back({"w" + std::to_string(w), 0.25, 0.01});
  const auto annotations = simulate_annotations(versions, workers, 3,
                                                lexicon, 77);

  MaceOptions mace;
  mace.restarts = 4;
  mace.iterations = 30;
  mace.seed = 0;
  std::map<std::string, double> f1;
  for (const char* m : {"mv", "t0", "t1", "t2", "mv_mv", "mace_mv",
                        "mace_t0"})
    f1[m] = f1_score(aggregate_by_name(annotations, m, mace), gold).f1;

  bool ok = true;
  for (const auto& [m, v] : f1)
    if (v > f1["t0"]) ok = false;
  if (!(f1["t0"] >= f1["t1"] && f1["t1"] >= f1["t2"])) ok = false;

  char detail[240];
  std::snprintf(detail, sizeof(detail),
                "t0=%.3f t1=%.3f t2=%.3f mv=%.3f mv_mv=%.3f mace_mv=%.3f "
                "mace_t0=%.3f",
                f1["t0"], f1["t1"], f1["t2"], f1["mv"], f1["mv_mv"],
                f1["mace_mv"], f1["mace_t0"]);
  report(6, "aggregation ordering", ok, detail);
}

// ---------------------------------------------------------------- criterion 7

void criterion_7() {
  // ten sentences with hand-derived changed counts {0,0,1,2,2,6,6,8,9,10}
  const std::vector<std::size_t> changed = {0, 0, 1, 2, 2, 6, 6, 8, 9, 10};
  Corpus original;
  std::map<std::string, TokenSeq> rewritten;
  for (std::size_t i = 0; i < changed.size(); ++i) {
    DataPoint p;
    p.id = "i" + std::to_string(i);
    p.gold = Label::NonTarget;
    for (int t = 0; t < 12; ++t)
      p.tokens.push_back("w" + std::to_string(t));
    rewritten[p.id] =
        TokenSeq(p.tokens.begin(),
                 p.tokens.begin() + (12 - static_cast<long>(changed[i])));
    original.points.push_back(std::move(p));
  }
  const ChangeHistogram h = copied_word_distribution(original, rewritten);
  const std::vector<std::pair<std::string, double>> expect = {
      {"0", 0.2}, {"1", 0.1}, {"2", 0.2},   {"3", 0.0}, {"4", 0.0},
      {"5", 0.0}, {"6", 0.2}, {"7-11", 0.3}};
  bool ok = h.buckets.size() == expect.size();
  for (std::size_t b = 0; ok && b < expect.size(); ++b)
    ok = h.buckets[b].first == expect[b].first &&
         std::abs(h.buckets[b].second - expect[b].second) < 1e-12;

  // the location-redaction example changes exactly one word
  const TokenSeq before = tokenize("show me flights from memphis");
  const TokenSeq after = tokenize("show me flights from <LOCATION>");
  const std::size_t memphis_changed =
      before.size() - lcs_length(before, after);
  if (memphis_changed != 1) ok = false;

  report(7, "copied-word histogram", ok,
         ok ? "exact bucket match; single-token example changed-count 1"
            : "histogram mismatch");
}

// ---------------------------------------------------------------- criterion 8

std::string run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  if (pipe) {
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) out += buf;
    pclose(pipe);
  }
  return out;
}

void criterion_8(const fs::path& fixtures, const std::string& cli) {
  const fs::path work = fs::temp_directory_path() / "privtext_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const auto make_config = [&](const fs::path& out_dir) {
    std::ostringstream j;
    j << "{\n"
      << "  \"corpus\": {\"path\": \"" << (fixtures / "synth.tsv").string()
      << "\", \"format\": \"tsv\"},\n"
      << "  \"gazetteers\": {\"names\": \""
      << (fixtures / "names.txt").string() << "\", \"locations\": \""
      << (fixtures / "locations.txt").string() << "\"},\n"
      << "  \"lexicon\": {\"corpus\": \"atis\"},\n"
      << "  \"pipelines\": [\"pii_only\", \"dp_only\", \"pii_dp\"],\n"
      << "  \"privacy\": {\"epsilons\": [100], \"delta\": 1e-4, \"clip\": "
         "1.0, \"noise\": \"gaussian\"},\n"
      << "  \"versions\": 2,\n"
      << "  \"workers\": {\"count\": 3, \"competence\": 1.0},\n"
      << "  \"annotations_per_version\": 3,\n"
      << "  \"methods\": [\"mv\", \"mace\"],\n"
      << "  \"mace\": {\"iterations\": 20, \"restarts\": 2},\n"
      << "  \"significance\": {\"resamples\": 500},\n"
      << "  \"output_dir\": \"" << out_dir.string() << "\"\n"
      << "}\n";
    const fs::path cfg = work / (out_dir.filename().string() + ".json");
    std::ofstream f(cfg);
    f << j.str();
    return cfg;
  };

  bool ok = true;
  std::string detail;

  const fs::path out1 = work / "run1", out2 = work / "run2";
  run_cli(cli, "experiment --config " + make_config(out1).string());
  run_cli(cli, "experiment --config " + make_config(out2).string());

  // byte-identical trees, config snapshot aside (it embeds output_dir)
  std::set<std::string> files1, files2;
  for (const auto& e : fs::directory_iterator(out1))
    files1.insert(e.path().filename().string());
  if (fs::exists(out2))
    for (const auto& e : fs::directory_iterator(out2))
      files2.insert(e.path().filename().string());
  if (files1.empty() || files1 != files2) {
    ok = false;
    detail = "output trees differ in file sets or are empty";
  }
  for (const std::string& f : files1) {
    if (f == "config.json") continue;
    if (slurp(out1 / f) != slurp(out2 / f)) {
      ok = false;
      detail = "file differs between runs: " + f;
    }
  }

  // gold-leak: HIT exports and rewritten outputs never carry labels
  for (const std::string& f : files1)
    if (f.rfind("hits_", 0) == 0 || f.rfind("rewritten_", 0) == 0) {
      const std::string content = slurp(out1 / f);
      if (content.find("\"label\"") != std::string::npos ||
          content.find("gold") != std::string::npos) {
        ok = false;
        detail = "gold leak in " + f;
      }
    }

  // redaction idempotence over every emitted rewritten text
  const Gazetteer names =
      load_gazetteer(fixtures / "names.txt", GazetteerKind::Name);
  const Gazetteer locations =
      load_gazetteer(fixtures / "locations.txt", GazetteerKind::Location);
  for (const std::string& f : files1)
    if (f.rfind("rewritten_", 0) == 0) {
      std::ifstream in(out1 / f);
      std::string line;
      while (std::getline(in, line)) {
        const auto pos = line.find("\"text\":\"");
        if (pos == std::string::npos) continue;
        const auto end = line.find('"', pos + 8);
        const TokenSeq toks = tokenize(line.substr(pos + 8, end - pos - 8));
        const TokenSeq once = redact(toks, names, locations).tokens;
        if (redact(once, names, locations).tokens != once) {
          ok = false;
          detail = "redaction not idempotent on a text in " + f;
        }
      }
    }

  if (ok)
    detail = "byte-identical reruns, no gold leak, redaction idempotent (" +
             std::to_string(files1.size()) + " files)";
  report(8, "experiment determinism", ok, detail);
  fs::remove_all(work);
}

}  // namespace

int main() {
  const fs::path fixtures = PRIVTEXT_FIXTURE_DIR;
  const std::string cli = PRIVTEXT_CLI_PATH;

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5(fixtures);
  criterion_6();
  criterion_7();
  criterion_8(fixtures, cli);

  std::printf("RESULT: %d/8 criteria passed\n", 8 - g_failures);
  return g_failures;
}
