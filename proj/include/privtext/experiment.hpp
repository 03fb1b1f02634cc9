// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "privtext/evaluation.hpp"
#include "privtext/pipeline.hpp"

namespace privtext {

// One experiment configuration; serializable to/from JSON and snapshotted
// into every run directory.
struct ExperimentConfig {
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::TSV;
  std::string target_class_name;

  double pretrain_ratio = 0.7;
  double validation_ratio = 0.1;
  double crowdsourcing_ratio = 0.2;
  std::uint64_t split_seed = 1;

  int codec_dim = 17;
  std::uint64_t codec_seed = 2;
  double codec_lambda = 0.05;
  int codec_max_len = 30;

  std::filesystem::path names_gazetteer;
  std::filesystem::path locations_gazetteer;

  // Lexicon: either a built-in corpus name or explicit entries.
  std::string lexicon_corpus;  // "atis" / "snips" / "ta"
  std::optional<std::filesystem::path> sentiment_lexicon;
  std::optional<TaskLexicon> explicit_lexicon;

  std::vector<PipelineKind> pipelines;
  std::vector<double> epsilons;  // one DP arm per value
  double delta = 1e-4;
  double clip_bound = 1.0;
  NoiseFamily noise_family = NoiseFamily::Gaussian;
  int versions = 1;
  std::uint64_t rewrite_seed = 3;

  int worker_count = 5;
  double worker_competence = 0.8;
  double worker_spam_target_prob = 0.5;
  int annotations_per_version = 5;
  std::uint64_t annotation_seed = 4;

  std::vector<std::string> methods = {"mace"};
  MaceOptions mace;

  double significance_alpha = 0.05;
  int significance_resamples = 10000;
  std::uint64_t significance_seed = 5;

  std::filesystem::path output_dir;

  static ExperimentConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  void validate() const;
  TaskLexicon resolve_lexicon() const;
};

struct ResultRow {
  std::string pipeline;
  std::string epsilon;  // "-" for PiiOnly arms
  std::string method;
  double f1 = 0;
  double class_share = 0;
  std::size_t indicator_target = 0;
  std::size_t indicator_rest = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::filesystem::path output_dir;
};

// Full run: split, fit codecs, pipelines, multi-version rewriting,
// simulated annotation, every configured aggregation, evaluation. All
// output files land under cfg.output_dir; re-running the same config
// produces byte-identical trees.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace privtext
