// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "privtext/codec.hpp"
#include "privtext/noise.hpp"

namespace privtext {

// encode -> clip (norm matched to the noise family) -> add i.i.d. noise of
// the given scale to every slot, length slot included -> decode. The
// released text is a post-processing of one noised latent. A scale of zero
// gives the codec's deterministic reconstruction.
TokenSeq rewrite_with_scale(const Codec& codec, const TokenSeq& tokens,
                            NoiseFamily family, double clip_bound,
                            double scale, std::uint64_t seed);

// Full DP rewrite: the noise scale is calibrated from params with
// sensitivity 2C (L1 clipping for Laplace, L2 for Gaussian).
TokenSeq dp_rewrite(const Codec& codec, const TokenSeq& tokens,
                    const PrivacyParams& params, std::uint64_t seed);

// k independent rewrites with per-version derived seeds; k = 1 matches
// dp_rewrite under the same derivation.
std::vector<TokenSeq> rewrite_versions(const Codec& codec,
                                       const TokenSeq& tokens,
                                       const PrivacyParams& params,
                                       std::uint64_t base_seed, int k);

// Seed derivation for version i of a multi-version rewrite.
std::uint64_t version_seed(std::uint64_t base_seed, int version);

}  // namespace privtext
