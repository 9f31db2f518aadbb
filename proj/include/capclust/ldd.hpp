#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "capclust/clustering.hpp"
#include "capclust/graph.hpp"

namespace capclust {

struct LddParams {
  double beta = 1.0;
  double p = 0.25;
  std::int64_t r = 0;
};

/// p = beta / 4, r = ceil((1/p) ln(n^2 / p) + 1/(4p)), taken literally.
inline LddParams ldd_params(double beta, std::size_t n) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("ldd: beta must lie in (0, 1]");
  if (n < 1) throw std::invalid_argument("ldd: n must be >= 1");
  const double p = beta / 4.0;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const double raw = (1.0 / p) * std::log(nn / p) + 1.0 / (4.0 * p);
  return {beta, p, static_cast<std::int64_t>(std::ceil(raw))};
}

/// Probabilistic low-diameter decomposition; strong diameter is at most 2r on every run.
inline Clustering ldd(const Graph& g, double beta, std::uint64_t seed) {
  const auto params = ldd_params(beta, g.num_vertices());
  return cluster(g, params.p, params.r, seed);
}

/// Per-edge inter-cluster counts over a batch of LDD trials.
struct CutStats {
  double beta = 1.0;
  std::size_t trials = 0;
  std::vector<Edge> edges;
  std::vector<std::uint64_t> cut_counts;

  double frequency(std::size_t i) const {
    return trials == 0 ? 0.0 : static_cast<double>(cut_counts[i]) / static_cast<double>(trials);
  }
  double bound(std::size_t i) const { return beta * static_cast<double>(edges[i].w); }
  /// The guarantee says nothing once beta * w >= 1.
  bool vacuous(std::size_t i) const { return bound(i) >= 1.0; }
  /// Three binomial standard deviations at the bound.
  double margin(std::size_t i) const {
    const double b = std::min(bound(i), 1.0);
    return trials == 0 ? 0.0 : 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
  }
  bool passes(std::size_t i) const { return vacuous(i) || frequency(i) <= bound(i) + margin(i); }

  double sum_frequency() const {
    double s = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) s += frequency(i);
    return s;
  }
  double beta_total_weight() const {
    double s = 0.0;
    for (const auto& e : edges) s += static_cast<double>(e.w);
    return beta * s;
  }

  /// Summation merge; commutative and associative over trial batches.
  CutStats& operator+=(const CutStats& other) {
    if (other.edges != edges || other.beta != beta) throw std::invalid_argument("CutStats: incompatible merge");
    trials += other.trials;
    for (std::size_t i = 0; i < cut_counts.size(); ++i) cut_counts[i] += other.cut_counts[i];
    return *this;
  }
};

namespace detail {

inline CutStats cut_batch(const Graph& g, double beta, std::uint64_t first_seed, std::size_t count) {
  CutStats stats;
  stats.beta = beta;
  stats.edges.assign(g.edges().begin(), g.edges().end());
  stats.cut_counts.assign(stats.edges.size(), 0);
  const auto params = ldd_params(beta, g.num_vertices());
  for (std::size_t t = 0; t < count; ++t) {
    const auto c = cluster(g, params.p, params.r, first_seed + t);
    for (std::size_t i = 0; i < stats.edges.size(); ++i) {
      if (c.center[stats.edges[i].u] != c.center[stats.edges[i].v]) ++stats.cut_counts[i];
    }
  }
  stats.trials = count;
  return stats;
}

}  // namespace detail

/// Runs ldd with seeds seed .. seed + trials - 1 and counts, per edge, the
/// trials in which its endpoints land in different clusters.
inline CutStats estimate_cut_prob(const Graph& g, double beta, std::size_t trials, std::uint64_t seed,
                                  unsigned threads = 1) {
  if (trials < 1) throw std::invalid_argument("estimate_cut_prob: trials must be >= 1");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (threads == 1) return detail::cut_batch(g, beta, seed, trials);

  std::vector<CutStats> parts(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (trials + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(trials, t * chunk);
    const std::size_t end = std::min(trials, begin + chunk);
    workers.emplace_back([&, t, begin, end] { parts[t] = detail::cut_batch(g, beta, seed + begin, end - begin); });
  }
  for (auto& w : workers) w.join();
  CutStats total = parts.front();
  for (std::size_t t = 1; t < parts.size(); ++t) total += parts[t];
  return total;
}

}  // namespace capclust
