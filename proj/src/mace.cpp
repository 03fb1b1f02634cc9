// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#include "privtext/mace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "privtext/rng.hpp"

namespace privtext {

namespace {

struct Indexed {
  std::vector<std::string> items;    // sorted
  std::vector<std::string> workers;  // sorted
  // (item index, worker index, label index) with Target = 0, NonTarget = 1.
  std::vector<std::array<std::size_t, 3>> obs;
};

Indexed index_annotations(const std::vector<Annotation>& annotations) {
  if (annotations.empty()) throw EmptyInput("no annotations to aggregate");
  Indexed ix;
  for (const Annotation& a : annotations) {
    ix.items.push_back(a.item_id);
    ix.workers.push_back(a.worker_id);
  }
  std::sort(ix.items.begin(), ix.items.end());
  ix.items.erase(std::unique(ix.items.begin(), ix.items.end()),
                 ix.items.end());
  std::sort(ix.workers.begin(), ix.workers.end());
  ix.workers.erase(std::unique(ix.workers.begin(), ix.workers.end()),
                   ix.workers.end());
  for (const Annotation& a : annotations) {
    const auto item = static_cast<std::size_t>(
        std::lower_bound(ix.items.begin(), ix.items.end(), a.item_id) -
        ix.items.begin());
    const auto worker = static_cast<std::size_t>(
        std::lower_bound(ix.workers.begin(), ix.workers.end(), a.worker_id) -
        ix.workers.begin());
    ix.obs.push_back(
        {item, worker, a.label == Label::Target ? 0u : 1u});
  }
  // Canonical observation order so the fit (down to floating-point
  // accumulation) does not depend on input order.
  std::sort(ix.obs.begin(), ix.obs.end());
  return ix;
}

struct EmState {
  std::vector<double> theta;                  // per worker
  std::vector<std::array<double, 2>> xi;      // per worker, sums to 1
  std::vector<std::array<double, 2>> posterior;  // per item
  double objective = 0;  // smoothed (MAP) log-likelihood
};

}  // namespace

MaceModel mace_fit(const std::vector<Annotation>& annotations,
                   const MaceOptions& options) {
  const Indexed ix = index_annotations(annotations);
  const std::size_t n_items = ix.items.size();
  const std::size_t n_workers = ix.workers.size();
  const double s = options.smoothing;
  if (s < 0) throw ConfigError("smoothing must be >= 0");
  if (options.iterations < 1 || options.restarts < 1)
    throw ConfigError("iterations and restarts must be >= 1");

  // Per-item observation lists for the E-step.
  std::vector<std::vector<std::size_t>> by_item(n_items);
  for (std::size_t o = 0; o < ix.obs.size(); ++o)
    by_item[ix.obs[o][0]].push_back(o);

  EmState best;
  bool have_best = false;

  for (int restart = 0; restart < options.restarts; ++restart) {
    SplitMix64 rng(
        mix_seed(options.seed, static_cast<std::uint64_t>(restart)));
    EmState st;
    st.theta.resize(n_workers);
    // Spam distributions start symmetric so the whole EM trajectory is
    // equivariant under a global Target/NonTarget relabeling.
    st.xi.assign(n_workers, {0.5, 0.5});
    for (double& t : st.theta) t = 0.2 + 0.6 * rng.next_uniform();
    st.posterior.assign(n_items, {0.5, 0.5});

    std::vector<double> copy_resp(ix.obs.size(), 0.0);
    std::vector<double> trace;

    for (int iter = 0; iter < options.iterations; ++iter) {
      // E-step: item posteriors and per-annotation copy responsibilities.
      double data_ll = 0;
      for (std::size_t i = 0; i < n_items; ++i) {
        std::array<double, 2> p = {0.5, 0.5};
        for (std::size_t o : by_item[i]) {
          const auto [item, w, a] = ix.obs[o];
          for (int t = 0; t < 2; ++t) {
            const double f = st.theta[w] * (a == static_cast<std::size_t>(t)
                                                ? 1.0
                                                : 0.0) +
                             (1.0 - st.theta[w]) * st.xi[w][a];
            p[static_cast<std::size_t>(t)] *= f;
          }
        }
        const double z = p[0] + p[1];
        if (!(z > 0) || !std::isfinite(z))
          throw NonFiniteLikelihood("degenerate item likelihood in EM");
        data_ll += std::log(z);
        st.posterior[i] = {p[0] / z, p[1] / z};
      }
      for (std::size_t o = 0; o < ix.obs.size(); ++o) {
        const auto [i, w, a] = ix.obs[o];
        double r = 0;
        for (std::size_t t = 0; t < 2; ++t) {
          const double copy = st.theta[w] * (a == t ? 1.0 : 0.0);
          const double f = copy + (1.0 - st.theta[w]) * st.xi[w][a];
          if (f > 0) r += st.posterior[i][t] * copy / f;
        }
        copy_resp[o] = r;
      }

      // Smoothed objective of the current parameters.
      double objective = data_ll;
      if (s > 0) {
        for (std::size_t w = 0; w < n_workers; ++w)
          objective += s * (std::log(st.theta[w]) +
                            std::log(1.0 - st.theta[w]) +
                            std::log(st.xi[w][0]) + std::log(st.xi[w][1]));
      }
      if (!std::isfinite(objective))
        throw NonFiniteLikelihood("non-finite EM objective");
      st.objective = objective;
      trace.push_back(objective);

      // M-step: re-estimate theta and xi from expected counts.
      std::vector<double> copy_sum(n_workers, 0.0), count(n_workers, 0.0);
      std::vector<std::array<double, 2>> spam_sum(n_workers, {0.0, 0.0});
      for (std::size_t o = 0; o < ix.obs.size(); ++o) {
        const auto [i, w, a] = ix.obs[o];
        copy_sum[w] += copy_resp[o];
        count[w] += 1.0;
        spam_sum[w][a] += 1.0 - copy_resp[o];
      }
      for (std::size_t w = 0; w < n_workers; ++w) {
        st.theta[w] = (copy_sum[w] + s) / (count[w] + 2.0 * s);
        const double spam_total = spam_sum[w][0] + spam_sum[w][1];
        st.xi[w][0] = (spam_sum[w][0] + s) / (spam_total + 2.0 * s);
        st.xi[w][1] = (spam_sum[w][1] + s) / (spam_total + 2.0 * s);
        if (s == 0 && spam_total == 0) st.xi[w] = {0.5, 0.5};
      }
    }

    // Refresh posteriors and objective once more so they reflect the final
    // parameters.
    double data_ll = 0;
    for (std::size_t i = 0; i < n_items; ++i) {
      std::array<double, 2> p = {0.5, 0.5};
      for (std::size_t o : by_item[i]) {
        const auto [item, w, a] = ix.obs[o];
        for (std::size_t t = 0; t < 2; ++t)
          p[t] *= st.theta[w] * (a == t ? 1.0 : 0.0) +
                  (1.0 - st.theta[w]) * st.xi[w][a];
      }
      const double z = p[0] + p[1];
      data_ll += std::log(z);
      st.posterior[i] = {p[0] / z, p[1] / z};
    }
    st.objective = data_ll;
    if (s > 0)
      for (std::size_t w = 0; w < n_workers; ++w)
        st.objective +=
            s * (std::log(st.theta[w]) + std::log(1.0 - st.theta[w]) +
                 std::log(st.xi[w][0]) + std::log(st.xi[w][1]));
    if (!std::isfinite(st.objective))
      throw NonFiniteLikelihood("non-finite EM objective");
    trace.push_back(st.objective);
    if (options.objective_trace)
      options.objective_trace->push_back(std::move(trace));

    if (!have_best || st.objective > best.objective) {
      best = st;
      have_best = true;
    }
  }

  MaceModel model;
  model.log_likelihood = best.objective;
  for (std::size_t w = 0; w < n_workers; ++w) {
    model.competences[ix.workers[w]] = best.theta[w];
    model.spam_dists[ix.workers[w]] = best.xi[w];
  }
  for (std::size_t i = 0; i < n_items; ++i)
    model.posteriors[ix.items[i]] = best.posterior[i];
  return model;
}

AggregatedLabels mace_decode(const MaceModel& model, double coverage) {
  if (coverage <= 0 || coverage > 1)
    throw ConfigError("coverage must lie in (0, 1]");
  std::vector<std::pair<std::string, std::array<double, 2>>> ranked(
      model.posteriors.begin(), model.posteriors.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return std::max(a.second[0], a.second[1]) >
                            std::max(b.second[0], b.second[1]);
                   });
  const auto n_label = static_cast<std::size_t>(std::ceil(
      coverage * static_cast<double>(ranked.size())));

  AggregatedLabels out;
  for (std::size_t i = 0; i < n_label; ++i) {
    const auto& [item, post] = ranked[i];
    out.labels[item] =
        post[0] > post[1] ? Label::Target : Label::NonTarget;
    out.confidence[item] = std::max(post[0], post[1]);
  }
  return out;
}

}  // namespace privtext
