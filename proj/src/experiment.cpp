// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "privtext/rng.hpp"

namespace privtext {

namespace {

std::string format_epsilon(double eps) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", eps);
  return buf;
}

std::string format_fraction(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

NoiseFamily parse_noise_family(const std::string& s) {
  if (s == "gaussian") return NoiseFamily::Gaussian;
  if (s == "laplace") return NoiseFamily::Laplace;
  throw ConfigError("unknown noise family: " + s);
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ConfigError("config file is not valid JSON: " + path.string());

  ExperimentConfig c;
  try {
    const auto& corpus = j.at("corpus");
    c.corpus_path = corpus.at("path").get<std::string>();
    const std::string fmt = corpus.value("format", "tsv");
    if (fmt == "tsv")
      c.corpus_format = CorpusFormat::TSV;
    else if (fmt == "jsonl")
      c.corpus_format = CorpusFormat::JSONL;
    else
      throw ConfigError("unknown corpus format: " + fmt);
    c.target_class_name = corpus.value("target_class_name", "");

    if (j.contains("split")) {
      const auto& s = j["split"];
      c.pretrain_ratio = s.value("pretrain", c.pretrain_ratio);
      c.validation_ratio = s.value("validation", c.validation_ratio);
      c.crowdsourcing_ratio = s.value("crowdsourcing", c.crowdsourcing_ratio);
      c.split_seed = s.value("seed", c.split_seed);
    }
    if (j.contains("codec")) {
      const auto& s = j["codec"];
      c.codec_dim = s.value("dim", c.codec_dim);
      c.codec_seed = s.value("seed", c.codec_seed);
      c.codec_lambda = s.value("frequency_prior_weight", c.codec_lambda);
      c.codec_max_len = s.value("max_len", c.codec_max_len);
    }
    if (j.contains("gazetteers")) {
      const auto& g = j["gazetteers"];
      c.names_gazetteer = g.value("names", std::string());
      c.locations_gazetteer = g.value("locations", std::string());
    }
    if (j.contains("lexicon")) {
      const auto& l = j["lexicon"];
      c.lexicon_corpus = l.value("corpus", "");
      if (l.contains("sentiment_file"))
        c.sentiment_lexicon = l["sentiment_file"].get<std::string>();
      if (l.contains("entries")) {
        TaskLexicon lex;
        lex.mode = l.value("mode", "target") == "target"
                       ? LexiconMode::PresenceImpliesTarget
                       : LexiconMode::PresenceImpliesNonTarget;
        for (const auto& e : l["entries"])
          lex.entries.insert(tokenize(e.get<std::string>()));
        c.explicit_lexicon = std::move(lex);
      }
    }
    for (const auto& p : j.value("pipelines", nlohmann::json::array()))
      c.pipelines.push_back(parse_pipeline_kind(p.get<std::string>()));
    if (j.contains("privacy")) {
      const auto& p = j["privacy"];
      c.delta = p.value("delta", c.delta);
      c.clip_bound = p.value("clip", c.clip_bound);
      c.noise_family =
          parse_noise_family(p.value("noise", std::string("gaussian")));
      for (const auto& e : p.value("epsilons", nlohmann::json::array()))
        c.epsilons.push_back(e.get<double>());
    }
    c.versions = j.value("versions", c.versions);
    c.rewrite_seed = j.value("rewrite_seed", c.rewrite_seed);
    if (j.contains("workers")) {
      const auto& w = j["workers"];
      c.worker_count = w.value("count", c.worker_count);
      c.worker_competence = w.value("competence", c.worker_competence);
      c.worker_spam_target_prob =
          w.value("spam_target_prob", c.worker_spam_target_prob);
    }
    c.annotations_per_version =
        j.value("annotations_per_version", c.annotations_per_version);
    c.annotation_seed = j.value("annotation_seed", c.annotation_seed);
    if (j.contains("methods"))
      c.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("mace")) {
      const auto& m = j["mace"];
      c.mace.iterations = m.value("iterations", c.mace.iterations);
      c.mace.smoothing = m.value("smoothing", c.mace.smoothing);
      c.mace.restarts = m.value("restarts", c.mace.restarts);
      c.mace.seed = m.value("seed", c.mace.seed);
    }
    if (j.contains("significance")) {
      const auto& s = j["significance"];
      c.significance_alpha = s.value("alpha", c.significance_alpha);
      c.significance_resamples =
          s.value("resamples", c.significance_resamples);
      c.significance_seed = s.value("seed", c.significance_seed);
    }
    c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  c.validate();
  return c;
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["corpus"] = {{"path", corpus_path.string()},
                 {"format",
                  corpus_format == CorpusFormat::TSV ? "tsv" : "jsonl"},
                 {"target_class_name", target_class_name}};
  j["split"] = {{"pretrain", pretrain_ratio},
                {"validation", validation_ratio},
                {"crowdsourcing", crowdsourcing_ratio},
                {"seed", split_seed}};
  j["codec"] = {{"dim", codec_dim},
                {"seed", codec_seed},
                {"frequency_prior_weight", codec_lambda},
                {"max_len", codec_max_len}};
  j["gazetteers"] = {{"names", names_gazetteer.string()},
                     {"locations", locations_gazetteer.string()}};
  nlohmann::json lex;
  if (!lexicon_corpus.empty()) lex["corpus"] = lexicon_corpus;
  if (sentiment_lexicon) lex["sentiment_file"] = sentiment_lexicon->string();
  if (explicit_lexicon) {
    lex["mode"] = explicit_lexicon->mode == LexiconMode::PresenceImpliesTarget
                      ? "target"
                      : "non_target";
    nlohmann::json entries = nlohmann::json::array();
    for (const TokenSeq& e : explicit_lexicon->entries)
      entries.push_back(join_tokens(e));
    lex["entries"] = entries;
  }
  j["lexicon"] = lex;
  nlohmann::json pipes = nlohmann::json::array();
  for (PipelineKind k : pipelines) pipes.push_back(to_string(k));
  j["pipelines"] = pipes;
  j["privacy"] = {
      {"delta", delta},
      {"clip", clip_bound},
      {"noise", noise_family == NoiseFamily::Gaussian ? "gaussian"
                                                      : "laplace"},
      {"epsilons", epsilons}};
  j["versions"] = versions;
  j["rewrite_seed"] = rewrite_seed;
  j["workers"] = {{"count", worker_count},
                  {"competence", worker_competence},
                  {"spam_target_prob", worker_spam_target_prob}};
  j["annotations_per_version"] = annotations_per_version;
  j["annotation_seed"] = annotation_seed;
  j["methods"] = methods;
  j["mace"] = {{"iterations", mace.iterations},
               {"smoothing", mace.smoothing},
               {"restarts", mace.restarts},
               {"seed", mace.seed}};
  j["significance"] = {{"alpha", significance_alpha},
                       {"resamples", significance_resamples},
                       {"seed", significance_seed}};
  j["output_dir"] = output_dir.string();

  std::ofstream out(path);
  if (!out) throw DataError("cannot write config snapshot: " + path.string());
  out << j.dump(2) << '\n';
}

void ExperimentConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("corpus path is required");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (pipelines.empty()) throw ConfigError("at least one pipeline required");
  const bool has_dp = std::any_of(
      pipelines.begin(), pipelines.end(),
      [](PipelineKind k) { return k != PipelineKind::PiiOnly; });
  if (has_dp && epsilons.empty())
    throw ConfigError("DP pipelines require at least one epsilon");
  for (double e : epsilons)
    if (e <= 0) throw NonPositiveEpsilon("epsilon must be positive");
  if (versions < 1) throw ConfigError("versions must be >= 1");
  if (annotations_per_version < 1 ||
      annotations_per_version > worker_count)
    throw ConfigError(
        "annotations_per_version must lie in [1, worker count]");
  if (methods.empty()) throw ConfigError("at least one method required");
  if (lexicon_corpus.empty() && !explicit_lexicon)
    throw ConfigError("a task lexicon is required");
}

TaskLexicon ExperimentConfig::resolve_lexicon() const {
  if (explicit_lexicon) return *explicit_lexicon;
  return builtin_lexicon(lexicon_corpus, sentiment_lexicon);
}

namespace {

struct Arm {
  std::string id;  // e.g. "pii_only" or "dp_only_eps20"
  PipelineKind kind;
  std::string epsilon_label;  // "-" for PiiOnly
  PrivacyParams params;
  int versions = 1;
};

void write_versions_file(const std::vector<RewrittenDataset>& versions,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write: " + path.string());
  for (const RewrittenDataset& v : versions)
    for (const auto& [item_id, tokens] : v.items) {
      nlohmann::json j;
      j["item_id"] = item_id;
      j["version_id"] = v.version_id;
      j["text"] = join_tokens(tokens);
      out << j.dump() << '\n';
    }
}

void write_histogram_csv(const ChangeHistogram& h,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write: " + path.string());
  out << "bucket,fraction\n";
  for (const auto& [label, fraction] : h.buckets)
    out << label << ',' << format_fraction(fraction) << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  cfg.save(cfg.output_dir / "config.json");

  const Corpus corpus = ingest_corpus(cfg.corpus_path, cfg.corpus_format);
  const CorpusSplits splits =
      split_corpus(corpus, cfg.pretrain_ratio, cfg.validation_ratio,
                   cfg.crowdsourcing_ratio, cfg.split_seed);

  Gazetteer names{GazetteerKind::Name, {}};
  Gazetteer locations{GazetteerKind::Location, {}};
  if (!cfg.names_gazetteer.empty())
    names = load_gazetteer(cfg.names_gazetteer, GazetteerKind::Name);
  if (!cfg.locations_gazetteer.empty())
    locations =
        load_gazetteer(cfg.locations_gazetteer, GazetteerKind::Location);

  PipelineCodecs codecs{
      Codec::fit(splits.pretrain, cfg.codec_dim, cfg.codec_seed),
      Codec::fit(redact_corpus(splits.pretrain, names, locations).first,
                 cfg.codec_dim, cfg.codec_seed)};
  for (Codec* c : {&codecs.raw, &codecs.redacted}) {
    c->set_frequency_prior_weight(cfg.codec_lambda);
    c->set_max_len(cfg.codec_max_len);
  }

  const TaskLexicon lexicon = cfg.resolve_lexicon();

  std::vector<WorkerProfile> workers;
  for (int w = 0; w < cfg.worker_count; ++w)
    workers.push_back({"w" + std::to_string(w), cfg.worker_competence,
                       cfg.worker_spam_target_prob});

  std::vector<Arm> arms;
  for (PipelineKind kind : cfg.pipelines) {
    if (kind == PipelineKind::PiiOnly) {
      Arm a{to_string(kind), kind, "-", {}, 1};
      arms.push_back(std::move(a));
    } else {
      for (double eps : cfg.epsilons) {
        Arm a;
        a.kind = kind;
        a.epsilon_label = format_epsilon(eps);
        a.id = std::string(to_string(kind)) + "_eps" + a.epsilon_label;
        a.params = {eps, cfg.delta, cfg.clip_bound, cfg.noise_family};
        a.versions = cfg.versions;
        arms.push_back(std::move(a));
      }
    }
  }

  ExperimentResult result;
  result.output_dir = cfg.output_dir;
  // (arm id, method) -> predictions, for pairwise significance.
  std::vector<std::tuple<std::string, std::string, AggregatedLabels>> preds;

  for (const Arm& arm : arms) {
    const std::uint64_t arm_seed = mix_seed(cfg.rewrite_seed, fnv1a(arm.id));
    const std::vector<RewrittenDataset> versions = run_pipeline_versions(
        splits, arm.kind, codecs, names, locations, arm.params, arm_seed,
        arm.versions);

    write_versions_file(versions,
                        cfg.output_dir / ("rewritten_" + arm.id + ".jsonl"));

    std::vector<RewrittenVersion> hit_versions;
    for (const RewrittenDataset& v : versions)
      hit_versions.push_back(v.as_version());
    export_hits(hit_versions, cfg.output_dir / ("hits_" + arm.id + ".jsonl"));

    const std::vector<Annotation> annotations = simulate_annotations(
        hit_versions, workers, cfg.annotations_per_version, lexicon,
        mix_seed(cfg.annotation_seed, fnv1a(arm.id)));
    write_annotations(annotations,
                      cfg.output_dir / ("annotations_" + arm.id + ".jsonl"));

    // Rewritten version 0 with gold attached, for the corpus-level stats.
    Corpus rewritten_v0;
    rewritten_v0.name = splits.crowdsourcing.name;
    rewritten_v0.target_class_name = splits.crowdsourcing.target_class_name;
    for (const DataPoint& p : splits.crowdsourcing.points) {
      DataPoint q = p;
      q.tokens = versions.front().items.at(p.id);
      q.raw_text = join_tokens(q.tokens);
      rewritten_v0.points.push_back(std::move(q));
    }
    const auto [ind_target, ind_rest] =
        indicator_counts(rewritten_v0, lexicon);
    write_histogram_csv(
        copied_word_distribution(splits.crowdsourcing,
                                 versions.front().items),
        cfg.output_dir / ("copied_" + arm.id + ".csv"));

    for (const std::string& method : cfg.methods) {
      const AggregatedLabels agg =
          aggregate_by_name(annotations, method, cfg.mace);
      const EvalReport report = f1_score(agg, splits.crowdsourcing);
      ResultRow row;
      row.pipeline = to_string(arm.kind);
      row.epsilon = arm.epsilon_label;
      row.method = method;
      row.f1 = report.f1;
      row.class_share = class_share(agg.labels);
      row.indicator_target = ind_target;
      row.indicator_rest = ind_rest;
      result.rows.push_back(row);
      preds.emplace_back(arm.id, method, agg);
    }
  }

  // Result tables.
  {
    std::ofstream out(cfg.output_dir / "results.csv");
    out << "pipeline,epsilon,method,f1,class_share,indicator_target,"
           "indicator_rest\n";
    for (const ResultRow& r : result.rows)
      out << r.pipeline << ',' << r.epsilon << ',' << r.method << ','
          << format_fraction(r.f1) << ',' << format_fraction(r.class_share)
          << ',' << r.indicator_target << ',' << r.indicator_rest << '\n';
  }
  {
    nlohmann::json rows = nlohmann::json::array();
    for (const ResultRow& r : result.rows)
      rows.push_back({{"pipeline", r.pipeline},
                      {"epsilon", r.epsilon},
                      {"method", r.method},
                      {"f1", r.f1},
                      {"class_share", r.class_share},
                      {"indicator_target", r.indicator_target},
                      {"indicator_rest", r.indicator_rest}});
    nlohmann::json j;
    j["gold_class_share"] = class_share(splits.crowdsourcing);
    j["rows"] = rows;
    std::ofstream out(cfg.output_dir / "results.json");
    out << j.dump(2) << '\n';
  }

  // Pairwise significance per method across arms.
  {
    std::ofstream out(cfg.output_dir / "significance.csv");
    out << "method,arm_a,arm_b,f1_diff,p_value,significant\n";
    for (std::size_t a = 0; a < preds.size(); ++a)
      for (std::size_t b = a + 1; b < preds.size(); ++b) {
        const auto& [arm_a, method_a, pred_a] = preds[a];
        const auto& [arm_b, method_b, pred_b] = preds[b];
        if (method_a != method_b) continue;
        const SignificanceResult sig = significance_test(
            pred_a, pred_b, splits.crowdsourcing, cfg.significance_alpha,
            cfg.significance_resamples,
            mix_seed(cfg.significance_seed,
                     fnv1a(arm_a + "|" + arm_b + "|" + method_a)));
        out << method_a << ',' << arm_a << ',' << arm_b << ','
            << format_fraction(sig.observed_diff) << ','
            << format_fraction(sig.p_value) << ','
            << (sig.significant ? "yes" : "no") << '\n';
      }
  }

  return result;
}

}  // namespace privtext
