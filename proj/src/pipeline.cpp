// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/pipeline.hpp"

#include "privtext/rng.hpp"

namespace privtext {

const char* to_string(PipelineKind k) {
  switch (k) {
    case PipelineKind::PiiOnly:
      return "pii_only";
    case PipelineKind::DpOnly:
      return "dp_only";
    case PipelineKind::PiiPlusDp:
      return "pii_dp";
  }
  return "pii_only";
}

PipelineKind parse_pipeline_kind(const std::string& s) {
  if (s == "pii_only") return PipelineKind::PiiOnly;
  if (s == "dp_only") return PipelineKind::DpOnly;
  if (s == "pii_dp" || s == "pii_plus_dp") return PipelineKind::PiiPlusDp;
  throw ConfigError("unknown pipeline kind: " + s);
}

RewrittenDataset run_pipeline(const CorpusSplits& splits, PipelineKind kind,
                              const PipelineCodecs& codecs,
                              const Gazetteer& names,
                              const Gazetteer& locations,
                              const PrivacyParams& params,
                              std::uint64_t seed) {
  RewrittenDataset out;
  out.version_id = std::string(to_string(kind)) + "/v0";
  out.kind = kind;
  out.params = params;
  out.seed = seed;

  for (const DataPoint& p : splits.crowdsourcing.points) {
    TokenSeq tokens = p.tokens;
    if (kind != PipelineKind::DpOnly)
      tokens = redact(tokens, names, locations).tokens;
    if (kind != PipelineKind::PiiOnly) {
      const Codec& codec =
          kind == PipelineKind::DpOnly ? codecs.raw : codecs.redacted;
      // Per-point seed derivation keeps parallel and serial runs identical.
      tokens = dp_rewrite(codec, tokens, params, mix_seed(seed, fnv1a(p.id)));
    }
    out.items.emplace(p.id, std::move(tokens));
  }
  return out;
}

std::vector<RewrittenDataset> run_pipeline_versions(
    const CorpusSplits& splits, PipelineKind kind,
    const PipelineCodecs& codecs, const Gazetteer& names,
    const Gazetteer& locations, const PrivacyParams& params,
    std::uint64_t seed, int k) {
  if (k < 1) throw ConfigError("version count must be >= 1");
  std::vector<RewrittenDataset> out;
  for (int v = 0; v < k; ++v) {
    RewrittenDataset d = run_pipeline(splits, kind, codecs, names, locations,
                                      params, version_seed(seed, v));
    d.version_id = std::string(to_string(kind)) + "/v" + std::to_string(v);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace privtext
