#pragma once

// Shared generators and slow reference computations for the test suites.

#include <cstdint>
#include <vector>

#include "capclust/distribution.hpp"
#include "capclust/generators.hpp"
#include "capclust/graph.hpp"
#include "capclust/hash.hpp"

namespace capclust::testing {

struct Instance {
  Graph g;
  std::int64_t r = 0;
  Offsets delta;
};

/// Random graph of up to max_n vertices with mixed density, optionally weighted,
/// and offsets drawn uniformly from [0, r]. Uniform offsets hit ties far more
/// often than geometric ones, which is what the tie-breaking checks need.
inline Instance random_instance(SplitMix64& rng, std::size_t max_n, bool weighted, std::int64_t max_r = 8) {
  Instance out;
  const std::size_t n = 1 + rng.below(max_n);
  const double density = rng.below(4) == 0 ? 0.5 * rng.unit() : 3.0 * rng.unit() / static_cast<double>(n);
  const Weight w_max = weighted ? 1 + static_cast<Weight>(rng.below(6)) : 1;
  out.g = gen_random(n, std::min(1.0, density), w_max, rng());
  out.r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_r) + 1));
  out.delta.delta.resize(n);
  for (auto& d : out.delta.delta) d = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(out.r) + 1));
  return out;
}

/// Bellman-Ford over the edge list: a second, unrelated shortest-path routine.
inline std::vector<Dist> bellman_ford(const Graph& g, VertexId src) {
  std::vector<Dist> d(g.num_vertices(), kUnreachable);
  d[src] = 0;
  for (std::size_t iter = 0; iter + 1 < g.num_vertices(); ++iter) {
    bool changed = false;
    for (const auto& e : g.edges()) {
      if (d[e.u] != kUnreachable && d[e.u] + e.w < d[e.v]) d[e.v] = d[e.u] + e.w, changed = true;
      if (d[e.v] != kUnreachable && d[e.v] + e.w < d[e.u]) d[e.u] = d[e.v] + e.w, changed = true;
    }
    if (!changed) break;
  }
  return d;
}

/// level and center straight from the definition: min over u of r - delta_u + d(u, x), ties to smaller u.
struct DefinitionClustering {
  std::vector<Dist> level;
  std::vector<VertexId> center;
};

inline DefinitionClustering cluster_by_definition(const Graph& g, std::int64_t r, const Offsets& delta) {
  const std::size_t n = g.num_vertices();
  DefinitionClustering out{std::vector<Dist>(n, kUnreachable), std::vector<VertexId>(n, kNoVertex)};
  for (VertexId u = 0; u < n; ++u) {
    const auto d = bellman_ford(g, u);
    for (VertexId x = 0; x < n; ++x) {
      if (d[x] == kUnreachable) continue;
      const Dist via = r - delta[u] + d[x];
      if (via < out.level[x]) {  // u ascends, so ties keep the smaller id
        out.level[x] = via;
        out.center[x] = u;
      }
    }
  }
  return out;
}

}  // namespace capclust::testing
