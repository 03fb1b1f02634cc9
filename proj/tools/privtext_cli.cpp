// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: corpus ingestion, splitting, codec fitting, the
// rewriting pipelines, annotation simulation, aggregation, evaluation, and
// whole-experiment runs from a config file.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "privtext/experiment.hpp"
#include "privtext/rng.hpp"

namespace pt = privtext;

namespace {

pt::CorpusFormat parse_format(const std::string& s) {
  if (s == "tsv") return pt::CorpusFormat::TSV;
  if (s == "jsonl") return pt::CorpusFormat::JSONL;
  throw pt::ConfigError("unknown corpus format: " + s);
}

void write_corpus_jsonl(const pt::Corpus& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw pt::DataError("cannot write: " + path);
  for (const pt::DataPoint& p : c.points) {
    nlohmann::json j;
    j["id"] = p.id;
    j["label"] = pt::to_string(p.gold);
    j["text"] = pt::join_tokens(p.tokens);
    out << j.dump() << '\n';
  }
}

// Rewritten dataset files are JSONL rows {item_id, version_id, text}.
std::vector<pt::RewrittenVersion> read_versions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pt::DataError("cannot open: " + path);
  std::map<std::string, pt::RewrittenVersion> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("item_id") ||
        !j.contains("version_id") || !j.contains("text"))
      throw pt::MalformedRecord("bad rewritten record at line " +
                                std::to_string(line_no));
    const auto vid = j["version_id"].get<std::string>();
    auto& v = by_id[vid];
    v.version_id = vid;
    v.items[j["item_id"].get<std::string>()] =
        pt::tokenize(j["text"].get<std::string>());
  }
  std::vector<pt::RewrittenVersion> out;
  for (auto& [vid, v] : by_id) out.push_back(std::move(v));
  return out;
}

// Annotation file reader without the exported-item check (used where no HIT
// batch is at hand).
std::vector<pt::Annotation> read_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pt::DataError("cannot open: " + path);
  std::vector<pt::Annotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw pt::MalformedAnnotationFile("bad annotation record at line " +
                                        std::to_string(line_no));
    try {
      out.push_back({j.at("item_id").get<std::string>(),
                     j.at("version_id").get<std::string>(),
                     j.at("worker_id").get<std::string>(),
                     pt::parse_label(j.at("label").get<std::string>())});
    } catch (const std::exception&) {
      throw pt::MalformedAnnotationFile("bad annotation record at line " +
                                        std::to_string(line_no));
    }
  }
  return out;
}

pt::AggregatedLabels read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pt::DataError("cannot open: " + path);
  pt::AggregatedLabels out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    const auto id = j.at("item_id").get<std::string>();
    out.labels[id] = pt::parse_label(j.at("label").get<std::string>());
    out.confidence[id] = j.value("confidence", 1.0);
  }
  return out;
}

void write_labels(const pt::AggregatedLabels& agg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw pt::DataError("cannot write: " + path);
  for (const auto& [id, label] : agg.labels) {
    nlohmann::json j;
    j["item_id"] = id;
    j["label"] = pt::to_string(label);
    j["confidence"] = agg.confidence.at(id);
    out << j.dump() << '\n';
  }
}

// Lexicon selection shared by several subcommands.
struct LexiconFlags {
  std::string builtin;        // atis / snips / ta
  std::string sentiment_file;  // for ta
  std::string lexicon_file;   // JSON {mode, entries}

  pt::TaskLexicon resolve() const {
    if (!lexicon_file.empty()) {
      std::ifstream in(lexicon_file);
      if (!in)
        throw pt::ConfigError("cannot open lexicon file: " + lexicon_file);
      nlohmann::json j = nlohmann::json::parse(in);
      pt::TaskLexicon lex;
      lex.mode = j.value("mode", "target") == "target"
                     ? pt::LexiconMode::PresenceImpliesTarget
                     : pt::LexiconMode::PresenceImpliesNonTarget;
      for (const auto& e : j.at("entries"))
        lex.entries.insert(pt::tokenize(e.get<std::string>()));
      return lex;
    }
    if (builtin.empty())
      throw pt::ConfigError("a lexicon (--lexicon or --lexicon-file) is "
                            "required");
    std::optional<std::filesystem::path> sent;
    if (!sentiment_file.empty()) sent = sentiment_file;
    return pt::builtin_lexicon(builtin, sent);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--lexicon", builtin,
                    "built-in lexicon name (atis, snips, ta)");
    cmd->add_option("--sentiment-lexicon", sentiment_file,
                    "word<TAB>mean<TAB>std_dev file (required for ta)");
    cmd->add_option("--lexicon-file", lexicon_file,
                    "JSON lexicon file {mode, entries}");
  }
};

pt::Gazetteer load_optional_gazetteer(const std::string& path,
                                      pt::GazetteerKind kind) {
  if (path.empty()) return pt::Gazetteer{kind, {}};
  return pt::load_gazetteer(path, kind);
}

int dispatch(int argc, char** argv) {
  CLI::App app{"privacy-preserving corpus rewriting and crowd-label "
               "aggregation toolkit"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "parse and validate a corpus, write normalized JSONL");
  std::string in_path, out_path, format = "tsv";
  ingest->add_option("--input", in_path)->required();
  ingest->add_option("--format", format, "tsv or jsonl");
  ingest->add_option("--output", out_path)->required();

  // split
  auto* split = app.add_subcommand(
      "split", "three-way split into pretrain/validation/crowdsourcing");
  std::string split_in, split_format = "tsv", split_dir;
  std::vector<double> ratios{0.7, 0.1, 0.2};
  std::uint64_t split_seed = 1;
  split->add_option("--input", split_in)->required();
  split->add_option("--format", split_format);
  split->add_option("--ratios", ratios, "pretrain validation crowdsourcing")
      ->expected(3);
  split->add_option("--seed", split_seed);
  split->add_option("--output-dir", split_dir)->required();

  // fit-codec
  auto* fit = app.add_subcommand("fit-codec",
                                 "fit the latent codec on a pretrain corpus");
  std::string fit_in, fit_format = "jsonl", fit_out, fit_names, fit_locations;
  int fit_dim = 17;
  std::uint64_t fit_seed = 2;
  bool fit_redact = false;
  fit->add_option("--pretrain", fit_in)->required();
  fit->add_option("--format", fit_format);
  fit->add_option("--dim", fit_dim);
  fit->add_option("--seed", fit_seed);
  fit->add_flag("--redact", fit_redact,
                "redact PII before fitting (for the pii_dp pipeline)");
  fit->add_option("--names", fit_names, "names gazetteer file");
  fit->add_option("--locations", fit_locations, "locations gazetteer file");
  fit->add_option("--output", fit_out)->required();

  // rewrite
  auto* rewrite = app.add_subcommand(
      "rewrite", "run one rewriting pipeline over a corpus");
  std::string rw_in, rw_format = "jsonl", rw_pipeline = "dp_only", rw_codec,
              rw_names, rw_locations, rw_out, rw_noise = "gaussian";
  double rw_eps = 10000, rw_delta = 1e-4, rw_clip = 1.0;
  std::uint64_t rw_seed = 3;
  int rw_versions = 1;
  rewrite->add_option("--input", rw_in)->required();
  rewrite->add_option("--format", rw_format);
  rewrite->add_option("--pipeline", rw_pipeline,
                      "pii_only, dp_only or pii_dp");
  rewrite->add_option("--codec", rw_codec, "codec file (DP pipelines)");
  rewrite->add_option("--names", rw_names);
  rewrite->add_option("--locations", rw_locations);
  rewrite->add_option("--epsilon", rw_eps);
  rewrite->add_option("--delta", rw_delta);
  rewrite->add_option("--clip", rw_clip);
  rewrite->add_option("--noise", rw_noise, "gaussian or laplace");
  rewrite->add_option("--seed", rw_seed);
  rewrite->add_option("--versions", rw_versions);
  rewrite->add_option("--output", rw_out)->required();

  // export-hits
  auto* hits = app.add_subcommand(
      "export-hits", "turn a rewritten dataset into a HIT batch file");
  std::string hits_in, hits_out;
  hits->add_option("--rewritten", hits_in)->required();
  hits->add_option("--output", hits_out)->required();

  // simulate
  auto* sim = app.add_subcommand("simulate",
                                 "simulated crowd annotation of a HIT batch");
  std::string sim_hits, sim_out;
  int sim_workers = 5, sim_per_version = 5;
  double sim_competence = 0.8, sim_spam = 0.5;
  std::uint64_t sim_seed = 4;
  LexiconFlags sim_lexicon;
  sim->add_option("--hits", sim_hits)->required();
  sim->add_option("--workers", sim_workers);
  sim->add_option("--competence", sim_competence);
  sim->add_option("--spam-target-prob", sim_spam);
  sim->add_option("--per-version", sim_per_version);
  sim->add_option("--seed", sim_seed);
  sim_lexicon.attach(sim);
  sim->add_option("--output", sim_out)->required();

  // import-annotations
  auto* imp = app.add_subcommand(
      "import-annotations",
      "validate an annotation file against its HIT batch");
  std::string imp_in, imp_hits, imp_out;
  imp->add_option("--input", imp_in)->required();
  imp->add_option("--hits", imp_hits)->required();
  imp->add_option("--output", imp_out)->required();

  // aggregate
  auto* agg = app.add_subcommand("aggregate",
                                 "aggregate annotations into item labels");
  std::string agg_in, agg_method = "mv", agg_out;
  pt::MaceOptions agg_mace;
  agg->add_option("--annotations", agg_in)->required();
  agg->add_option("--method", agg_method,
                  "mv, t:<x>, mace, mv_mv, mace_mv, mace_t0");
  agg->add_option("--mace-iterations", agg_mace.iterations);
  agg->add_option("--mace-smoothing", agg_mace.smoothing);
  agg->add_option("--mace-restarts", agg_mace.restarts);
  agg->add_option("--mace-seed", agg_mace.seed);
  agg->add_option("--output", agg_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "evaluation reports");
  eval->require_subcommand(1);
  std::string ev_pred, ev_pred_b, ev_gold, ev_gold_format = "jsonl",
              ev_rewritten, ev_labels, ev_stopwords, ev_out;
  double ev_alpha = 0.05;
  int ev_resamples = 10000, ev_k = 25;
  std::uint64_t ev_seed = 5;
  LexiconFlags ev_lexicon;

  auto* ev_f1 = eval->add_subcommand("f1", "F1 against gold labels");
  ev_f1->add_option("--pred", ev_pred)->required();
  ev_f1->add_option("--gold", ev_gold)->required();
  ev_f1->add_option("--format", ev_gold_format);

  auto* ev_sig = eval->add_subcommand(
      "sig", "paired-bootstrap significance of an F1 difference");
  ev_sig->add_option("--pred-a", ev_pred)->required();
  ev_sig->add_option("--pred-b", ev_pred_b)->required();
  ev_sig->add_option("--gold", ev_gold)->required();
  ev_sig->add_option("--format", ev_gold_format);
  ev_sig->add_option("--alpha", ev_alpha);
  ev_sig->add_option("--resamples", ev_resamples);
  ev_sig->add_option("--seed", ev_seed);

  auto* ev_ind = eval->add_subcommand(
      "indicator", "indicator-word counts per class");
  ev_ind->add_option("--corpus", ev_gold)->required();
  ev_ind->add_option("--format", ev_gold_format);
  ev_lexicon.attach(ev_ind);

  auto* ev_cop = eval->add_subcommand(
      "copied", "changed-word histogram original vs rewritten");
  ev_cop->add_option("--original", ev_gold)->required();
  ev_cop->add_option("--format", ev_gold_format);
  ev_cop->add_option("--rewritten", ev_rewritten)->required();
  ev_cop->add_option("--output", ev_out);

  auto* ev_share = eval->add_subcommand("share",
                                        "fraction of Target labels");
  ev_share->add_option("--labels", ev_labels);
  ev_share->add_option("--gold", ev_gold);
  ev_share->add_option("--format", ev_gold_format);

  auto* ev_terms = eval->add_subcommand(
      "terms", "top-k non-stopword terms per class");
  ev_terms->add_option("--corpus", ev_gold)->required();
  ev_terms->add_option("--format", ev_gold_format);
  ev_terms->add_option("--k", ev_k);
  ev_terms->add_option("--stopwords", ev_stopwords, "one word per line");

  // experiment
  auto* exp = app.add_subcommand("experiment",
                                 "full experiment run from a config file");
  std::string exp_config;
  exp->add_option("--config", exp_config)->required();

  CLI11_PARSE(app, argc, argv);

  if (*ingest) {
    write_corpus_jsonl(pt::ingest_corpus(in_path, parse_format(format)),
                       out_path);
    return 0;
  }
  if (*split) {
    const pt::Corpus c =
        pt::ingest_corpus(split_in, parse_format(split_format));
    const pt::CorpusSplits s =
        pt::split_corpus(c, ratios[0], ratios[1], ratios[2], split_seed);
    std::filesystem::create_directories(split_dir);
    write_corpus_jsonl(s.pretrain, split_dir + "/pretrain.jsonl");
    write_corpus_jsonl(s.validation, split_dir + "/validation.jsonl");
    write_corpus_jsonl(s.crowdsourcing, split_dir + "/crowdsourcing.jsonl");
    return 0;
  }
  if (*fit) {
    pt::Corpus pretrain = pt::ingest_corpus(fit_in, parse_format(fit_format));
    if (fit_redact) {
      const auto names =
          load_optional_gazetteer(fit_names, pt::GazetteerKind::Name);
      const auto locations =
          load_optional_gazetteer(fit_locations, pt::GazetteerKind::Location);
      pretrain = pt::redact_corpus(pretrain, names, locations).first;
    }
    pt::Codec::fit(pretrain, fit_dim, fit_seed).save(fit_out);
    return 0;
  }
  if (*rewrite) {
    const pt::Corpus c = pt::ingest_corpus(rw_in, parse_format(rw_format));
    const pt::PipelineKind kind = pt::parse_pipeline_kind(rw_pipeline);
    const auto names =
        load_optional_gazetteer(rw_names, pt::GazetteerKind::Name);
    const auto locations =
        load_optional_gazetteer(rw_locations, pt::GazetteerKind::Location);
    std::optional<pt::Codec> codec;
    if (kind != pt::PipelineKind::PiiOnly) {
      if (rw_codec.empty())
        throw pt::ConfigError("--codec is required for DP pipelines");
      codec = pt::Codec::load(rw_codec);
    }
    const pt::PrivacyParams params{rw_eps, rw_delta, rw_clip,
                                   rw_noise == "laplace"
                                       ? pt::NoiseFamily::Laplace
                                       : pt::NoiseFamily::Gaussian};
    std::ofstream out(rw_out);
    if (!out) throw pt::DataError("cannot write: " + rw_out);
    const int n_versions = kind == pt::PipelineKind::PiiOnly ? 1 : rw_versions;
    for (int v = 0; v < n_versions; ++v) {
      const std::string vid =
          std::string(pt::to_string(kind)) + "/v" + std::to_string(v);
      for (const pt::DataPoint& p : c.points) {
        pt::TokenSeq tokens = p.tokens;
        if (kind != pt::PipelineKind::DpOnly)
          tokens = pt::redact(tokens, names, locations).tokens;
        if (kind != pt::PipelineKind::PiiOnly)
          tokens = pt::dp_rewrite(
              *codec, tokens, params,
              pt::mix_seed(pt::version_seed(rw_seed, v), pt::fnv1a(p.id)));
        nlohmann::json j;
        j["item_id"] = p.id;
        j["version_id"] = vid;
        j["text"] = pt::join_tokens(tokens);
        out << j.dump() << '\n';
      }
    }
    return 0;
  }
  if (*hits) {
    pt::export_hits(read_versions(hits_in), hits_out);
    return 0;
  }
  if (*sim) {
    std::vector<pt::WorkerProfile> workers;
    for (int w = 0; w < sim_workers; ++w)
      workers.push_back({"w" + std::to_string(w), sim_competence, sim_spam});
    const auto annotations = pt::simulate_annotations(
        read_versions(sim_hits), workers, sim_per_version,
        sim_lexicon.resolve(), sim_seed);
    pt::write_annotations(annotations, sim_out);
    return 0;
  }
  if (*imp) {
    pt::write_annotations(
        pt::import_annotations(imp_in, read_versions(imp_hits)), imp_out);
    return 0;
  }
  if (*agg) {
    const auto annotations = read_annotations(agg_in);
    write_labels(pt::aggregate_by_name(annotations, agg_method, agg_mace),
                 agg_out);
    return 0;
  }
  if (*ev_f1) {
    const auto report = pt::f1_score(
        read_labels(ev_pred),
        pt::ingest_corpus(ev_gold, parse_format(ev_gold_format)));
    std::cout << "f1=" << report.f1 << " tp=" << report.tp
              << " fp=" << report.fp << " fn=" << report.fn
              << " tn=" << report.tn << '\n';
    return 0;
  }
  if (*ev_sig) {
    const auto gold =
        pt::ingest_corpus(ev_gold, parse_format(ev_gold_format));
    const auto res = pt::significance_test(
        read_labels(ev_pred), read_labels(ev_pred_b), gold, ev_alpha,
        ev_resamples, ev_seed);
    std::cout << "f1_diff=" << res.observed_diff << " p=" << res.p_value
              << " significant=" << (res.significant ? "yes" : "no") << '\n';
    return 0;
  }
  if (*ev_ind) {
    const auto corpus =
        pt::ingest_corpus(ev_gold, parse_format(ev_gold_format));
    const auto [t, r] = pt::indicator_counts(corpus, ev_lexicon.resolve());
    std::cout << "target=" << t << " rest=" << r << '\n';
    return 0;
  }
  if (*ev_cop) {
    const auto original =
        pt::ingest_corpus(ev_gold, parse_format(ev_gold_format));
    const auto versions = read_versions(ev_rewritten);
    if (versions.empty()) throw pt::DataError("rewritten file is empty");
    const auto hist =
        pt::copied_word_distribution(original, versions.front().items);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!ev_out.empty()) {
      file.open(ev_out);
      os = &file;
    }
    *os << "bucket,fraction\n";
    for (const auto& [label, fraction] : hist.buckets)
      *os << label << ',' << fraction << '\n';
    return 0;
  }
  if (*ev_share) {
    if (!ev_labels.empty()) {
      std::cout << pt::class_share(read_labels(ev_labels).labels) << '\n';
    } else if (!ev_gold.empty()) {
      std::cout << pt::class_share(
                       pt::ingest_corpus(ev_gold,
                                         parse_format(ev_gold_format)))
                << '\n';
    } else {
      throw pt::ConfigError("share needs --labels or --gold");
    }
    return 0;
  }
  if (*ev_terms) {
    const auto corpus =
        pt::ingest_corpus(ev_gold, parse_format(ev_gold_format));
    std::set<std::string> stopwords = pt::default_stopwords();
    if (!ev_stopwords.empty()) {
      stopwords.clear();
      std::ifstream in(ev_stopwords);
      if (!in) throw pt::DataError("cannot open: " + ev_stopwords);
      std::string w;
      while (in >> w) stopwords.insert(w);
    }
    const auto table =
        pt::top_k_terms(corpus, static_cast<std::size_t>(ev_k), stopwords);
    std::cout << "class,term,count\n";
    for (const auto& [term, count] : table.target)
      std::cout << "target," << term << ',' << count << '\n';
    for (const auto& [term, count] : table.non_target)
      std::cout << "non_target," << term << ',' << count << '\n';
    return 0;
  }
  if (*exp) {
    const auto result =
        pt::run_experiment(pt::ExperimentConfig::load(exp_config));
    std::cout << "pipeline,epsilon,method,f1\n";
    for (const auto& row : result.rows)
      std::cout << row.pipeline << ',' << row.epsilon << ',' << row.method
                << ',' << row.f1 << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const pt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const pt::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
