// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/rewrite.hpp"

#include "privtext/rng.hpp"

namespace privtext {

TokenSeq rewrite_with_scale(const Codec& codec, const TokenSeq& tokens,
                            NoiseFamily family, double clip_bound,
                            double scale, std::uint64_t seed) {
  const ClipNorm norm =
      family == NoiseFamily::Laplace ? ClipNorm::L1 : ClipNorm::L2;
  LatentVector z = clip_latent(codec.encode(tokens), clip_bound, norm);

  if (scale > 0) {
    SplitMix64 rng(mix_seed(seed, fnv1a("dp_rewrite")));
    for (Eigen::Index i = 0; i < z.size(); ++i)
      z[i] += family == NoiseFamily::Laplace ? rng.next_laplace(scale)
                                             : scale * rng.next_normal();
  }
  return codec.decode(z);
}

TokenSeq dp_rewrite(const Codec& codec, const TokenSeq& tokens,
                    const PrivacyParams& params, std::uint64_t seed) {
  const double sensitivity = 2.0 * params.clip_bound;
  const double scale = calibrate_noise(params, sensitivity);
  return rewrite_with_scale(codec, tokens, params.noise_family,
                            params.clip_bound, scale, seed);
}

std::uint64_t version_seed(std::uint64_t base_seed, int version) {
  return mix_seed(base_seed, static_cast<std::uint64_t>(version));
}

std::vector<TokenSeq> rewrite_versions(const Codec& codec,
                                       const TokenSeq& tokens,
                                       const PrivacyParams& params,
                                       std::uint64_t base_seed, int k) {
  if (k < 1) throw ConfigError("version count must be >= 1");
  const double sensitivity = 2.0 * params.clip_bound;
  const double scale = calibrate_noise(params, sensitivity);
  std::vector<TokenSeq> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    out.push_back(rewrite_with_scale(codec, tokens, params.noise_family,
                                     params.clip_bound, scale,
                                     version_seed(base_seed, i)));
  return out;
}

}  // namespace privtext
