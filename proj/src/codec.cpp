// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/codec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "privtext/rng.hpp"

namespace privtext {

namespace {

Eigen::VectorXd hashed_unit_embedding(const std::string& token,
                                      std::uint64_t fit_seed, int slots) {
  SplitMix64 rng(mix_seed(fnv1a(token), fit_seed));
  Eigen::VectorXd v(slots);
  for (int i = 0; i < slots; ++i) v[i] = rng.next_normal();
  const double n = v.norm();
  if (n > 0) v /= n;
  return v;
}

}  // namespace

Codec Codec::fit(const Corpus& pretrain, int dim, std::uint64_t seed) {
  if (pretrain.points.empty()) throw EmptyPretrain("empty pretrain corpus");
  if (dim < 2) throw ConfigError("codec dim must be >= 2");

  std::map<std::string, std::uint64_t> counts;
  for (const DataPoint& p : pretrain.points)
    for (const std::string& t : p.tokens) ++counts[t];
  counts.emplace(kUnkToken, 1);

  Codec c;
  c.dim_ = dim;
  c.fit_seed_ = seed;
  for (const auto& [token, n] : counts) {
    c.index_.emplace(token, c.vocabulary_.size());
    c.vocabulary_.push_back(token);
    c.freqs_.push_back(n);
    c.total_freq_ += n;
  }
  c.rebuild_embeddings();
  return c;
}

void Codec::rebuild_embeddings() {
  const int slots = dim_ - 1;
  embeddings_.resize(slots, static_cast<Eigen::Index>(vocabulary_.size()));
  for (std::size_t k = 0; k < vocabulary_.size(); ++k)
    embeddings_.col(static_cast<Eigen::Index>(k)) =
        hashed_unit_embedding(vocabulary_[k], fit_seed_, slots);
}

std::uint64_t Codec::unigram_freq(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? 0 : freqs_[it->second];
}

Eigen::VectorXd Codec::embedding(const std::string& token) const {
  const auto it = index_.find(token);
  const std::size_t k =
      it == index_.end() ? index_.at(kUnkToken) : it->second;
  return embeddings_.col(static_cast<Eigen::Index>(k));
}

LatentVector Codec::encode(const TokenSeq& tokens) const {
  if (tokens.empty()) throw EmptyInput("cannot encode an empty token list");
  const int slots = dim_ - 1;
  Eigen::VectorXd content = Eigen::VectorXd::Zero(slots);
  for (const std::string& t : tokens) content += embedding(t);
  content /= static_cast<double>(tokens.size());

  LatentVector z(dim_);
  z.head(slots) = content;
  z[slots] = static_cast<double>(tokens.size()) / length_scale_;
  return z;
}

TokenSeq Codec::decode(const LatentVector& z) const {
  const int slots = dim_ - 1;
  const long wanted = std::lround(z[slots] * length_scale_);
  const long len = std::clamp<long>(wanted, 1, max_len_);

  const Eigen::VectorXd log_prior =
      (freqs_.empty()
           ? Eigen::VectorXd()
           : Eigen::Map<const Eigen::Matrix<std::uint64_t, Eigen::Dynamic, 1>>(
                 freqs_.data(), static_cast<Eigen::Index>(freqs_.size()))
                 .cast<double>()
                 .array()
                 .log()
                 .matrix()) -
      Eigen::VectorXd::Constant(
          static_cast<Eigen::Index>(freqs_.size()),
          std::log(static_cast<double>(total_freq_)));

  Eigen::VectorXd residual = z.head(slots);
  TokenSeq out;
  out.reserve(static_cast<std::size_t>(len));
  for (long step = 0; step < len; ++step) {
    const double rnorm = residual.norm();
    Eigen::VectorXd score = lambda_ * log_prior;
    if (rnorm > 0) score += (embeddings_.transpose() * residual) / rnorm;
    // Ties break toward the lexicographically first vocabulary entry.
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < score.size(); ++k)
      if (score[k] > score[best]) best = k;
    out.push_back(vocabulary_[static_cast<std::size_t>(best)]);
    residual -= embeddings_.col(best) * embeddings_.col(best).dot(residual);
  }
  return out;
}

void Codec::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["dim"] = dim_;
  j["vocabulary"] = vocabulary_;
  j["unigram_freq"] = freqs_;
  j["length_scale"] = length_scale_;
  j["fit_seed"] = fit_seed_;
  j["frequency_prior_weight"] = lambda_;
  j["max_len"] = max_len_;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write codec file: " + path.string());
  out << j.dump(2) << '\n';
}

Codec Codec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open codec file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("format_version", 0) != 1)
    throw DataError("unrecognized codec file: " + path.string());

  Codec c;
  c.dim_ = j.at("dim").get<int>();
  c.vocabulary_ = j.at("vocabulary").get<std::vector<std::string>>();
  c.freqs_ = j.at("unigram_freq").get<std::vector<std::uint64_t>>();
  c.length_scale_ = j.at("length_scale").get<double>();
  c.fit_seed_ = j.at("fit_seed").get<std::uint64_t>();
  c.lambda_ = j.at("frequency_prior_weight").get<double>();
  c.max_len_ = j.at("max_len").get<int>();
  if (c.dim_ < 2 || c.vocabulary_.size() != c.freqs_.size())
    throw DataError("inconsistent codec file: " + path.string());
  for (std::size_t k = 0; k < c.vocabulary_.size(); ++k) {
    c.index_.emplace(c.vocabulary_[k], k);
    c.total_freq_ += c.freqs_[k];
  }
  c.rebuild_embeddings();
  return c;
}

LatentVector clip_latent(const LatentVector& z, double clip_bound,
                         ClipNorm norm) {
  if (clip_bound <= 0) throw ConfigError("clip bound must be positive");
  const double n =
      norm == ClipNorm::L2 ? z.norm() : z.lpNorm<1>();
  if (n == 0 || n <= clip_bound) return z;
  return z * (clip_bound / n);
}

}  // namespace privtext
