// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "privtext/annotation.hpp"
#include "privtext/codec.hpp"
#include "privtext/redaction.hpp"
#include "privtext/rewrite.hpp"

namespace privtext {

enum class PipelineKind { PiiOnly, DpOnly, PiiPlusDp };

const char* to_string(PipelineKind k);
PipelineKind parse_pipeline_kind(const std::string& s);

struct RewrittenDataset {
  std::string version_id;
  PipelineKind kind = PipelineKind::PiiOnly;
  PrivacyParams params;  // meaningful for the DP pipelines only
  std::uint64_t seed = 0;
  std::map<std::string, TokenSeq> items;  // item_id -> rewritten tokens

  RewrittenVersion as_version() const { return {version_id, items}; }
};

// Codecs fitted on the pretrain split: DpOnly rewrites with the
// raw-pretrained codec, PiiPlusDp redacts first and rewrites with the codec
// pretrained on redacted data.
struct PipelineCodecs {
  Codec raw;
  Codec redacted;
};

RewrittenDataset run_pipeline(const CorpusSplits& splits, PipelineKind kind,
                              const PipelineCodecs& codecs,
                              const Gazetteer& names,
                              const Gazetteer& locations,
                              const PrivacyParams& params, std::uint64_t seed);

// Multi-version variant: k independently noised rewrites of the same arm.
// PiiOnly is deterministic, so all k versions coincide.
std::vector<RewrittenDataset> run_pipeline_versions(
    const CorpusSplits& splits, PipelineKind kind,
    const PipelineCodecs& codecs, const Gazetteer& names,
    const Gazetteer& locations, const PrivacyParams& params,
    std::uint64_t seed, int k);

}  // namespace privtext
