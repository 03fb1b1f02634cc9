// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "privtext/corpus.hpp"

namespace privtext {

// Latent representation of a sentence: dim-1 content slots holding the mean
// token embedding, plus one trailing length slot.
using LatentVector = Eigen::VectorXd;

inline constexpr const char* kUnkToken = "<UNK>";

// Hashed bag-of-embeddings codec. Token embeddings are unit vectors derived
// deterministically from (token, fit_seed); decoding is greedy matching
// pursuit with a unigram-frequency prior. Immutable after fitting.
class Codec {
 public:
  // Vocabulary comes from the pretraining corpus; <UNK> is always present.
  static Codec fit(const Corpus& pretrain, int dim, std::uint64_t seed);

  LatentVector encode(const TokenSeq& tokens) const;

  // Greedy matching-pursuit reconstruction from a (possibly noised) latent.
  // Output length is the clamped, rounded length slot.
  TokenSeq decode(const LatentVector& z) const;

  int dim() const { return dim_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::uint64_t fit_seed() const { return fit_seed_; }
  double length_scale() const { return length_scale_; }
  int max_len() const { return max_len_; }
  double frequency_prior_weight() const { return lambda_; }

  std::uint64_t unigram_freq(const std::string& token) const;

  // Embedding of a vocabulary token (or the <UNK> embedding for OOV).
  Eigen::VectorXd embedding(const std::string& token) const;

  // JSON serialization; embeddings are regenerated from fit_seed on load.
  void save(const std::filesystem::path& path) const;
  static Codec load(const std::filesystem::path& path);

  // Decoder knobs, applied before any decode call.
  void set_frequency_prior_weight(double lambda) { lambda_ = lambda; }
  void set_max_len(int max_len) { max_len_ = max_len; }

 private:
  Codec() = default;
  void rebuild_embeddings();

  int dim_ = 0;
  std::vector<std::string> vocabulary_;  // sorted, unique, includes <UNK>
  Eigen::MatrixXd embeddings_;           // (dim-1) x |vocabulary|, unit cols
  std::vector<std::uint64_t> freqs_;     // aligned with vocabulary_
  std::uint64_t total_freq_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  double length_scale_ = 30.0;
  std::uint64_t fit_seed_ = 0;
  double lambda_ = 0.05;
  int max_len_ = 30;
};

// z * min(1, C / ||z||); a zero vector passes through unchanged.
enum class ClipNorm { L1, L2 };
LatentVector clip_latent(const LatentVector& z, double clip_bound,
                         ClipNorm norm);

}  // namespace privtext
