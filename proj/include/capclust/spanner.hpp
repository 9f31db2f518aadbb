#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "capclust/clustering.hpp"
#include "capclust/graph.hpp"

namespace capclust {

/// A clustering plus the sparsified inter-cluster edge set F.
struct SparsifiedDecomposition {
  Clustering clustering;
  std::vector<Edge> F;  // canonical (u < v), sorted, unique
  std::int64_t k = 0;

  friend bool operator==(const SparsifiedDecomposition&, const SparsifiedDecomposition&) = default;
};

struct Spanner {
  SparsifiedDecomposition decomposition;
  std::vector<Edge> H;  // F united with the support forest
};

/// What a vertex knows about one neighbor after the clustering rounds.
struct NeighborState {
  VertexId id = kNoVertex;
  Dist level = 0;
  VertexId center = kNoVertex;
};

/// The per-vertex sparsification rule.
///
/// A neighbor y qualifies when level(y) = level(x) - 1, or when level(y) =
/// level(x) and center(y) < center(x). For every cluster among qualifying
/// neighbors one edge is kept, to the neighbor of minimum (level, id).
/// Uses only information a vertex has locally after the distributed clustering.
inline std::vector<VertexId> sparsify_rule(Dist level_x, VertexId center_x, std::span<const NeighborState> neighbors) {
  std::vector<NeighborState> qualifying;
  for (const auto& y : neighbors) {
    if (y.level == level_x - 1 || (y.level == level_x && y.center < center_x)) qualifying.push_back(y);
  }
  std::sort(qualifying.begin(), qualifying.end(), [](const NeighborState& a, const NeighborState& b) {
    return std::tie(a.center, a.level, a.id) < std::tie(b.center, b.level, b.id);
  });
  std::vector<VertexId> chosen;
  for (std::size_t i = 0; i < qualifying.size(); ++i) {
    if (i == 0 || qualifying[i].center != qualifying[i - 1].center) chosen.push_back(qualifying[i].id);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// Neighbors x keeps an F-edge to.
inline std::vector<VertexId> sparsify_vertex(const Graph& g, const Clustering& c, VertexId x) {
  std::vector<NeighborState> nbs;
  nbs.reserve(g.degree(x));
  for (const auto& nb : g.neighbors(x)) nbs.push_back({nb.id, c.level[nb.id], c.center[nb.id]});
  return sparsify_rule(c.level[x], c.center[x], nbs);
}

inline std::vector<Edge> canonical_edge_set(std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

/// F as the union of the per-vertex rule over all vertices.
inline std::vector<Edge> sparsify(const Graph& g, const Clustering& c) {
  if (!g.unweighted()) throw std::invalid_argument("sparsify: graph must be unweighted");
  std::vector<Edge> f;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    for (VertexId y : sparsify_vertex(g, c, x)) f.push_back({x, y, 1});
  }
  return canonical_edge_set(std::move(f));
}

/// (p, r) = (1 - n^(-1/k), k - 1).
inline std::pair<double, std::int64_t> spanner_params(std::size_t n, std::int64_t k) {
  if (k < 2) throw std::invalid_argument("spanner: k must be >= 2");
  const double p = 1.0 - std::pow(static_cast<double>(n), -1.0 / static_cast<double>(k));
  return {p, k - 1};
}

inline std::vector<Edge> spanner_edges(const Graph& g, const SparsifiedDecomposition& d) {
  auto h = d.F;
  const auto forest = d.clustering.support_forest(g);
  h.insert(h.end(), forest.begin(), forest.end());
  return canonical_edge_set(std::move(h));
}

/// Clustering with (p, r) = (1 - n^(-1/k), k - 1), then F, then H = F u T.
///
/// A single vertex has p = 0, outside GeomCap's domain; it is its own cluster.
inline Spanner build_spanner(const Graph& g, std::int64_t k, std::uint64_t seed) {
  if (!g.unweighted()) throw std::invalid_argument("build_spanner: graph must be unweighted");
  const auto [p, r] = spanner_params(g.num_vertices(), k);
  Spanner out;
  auto& d = out.decomposition;
  if (g.num_vertices() <= 1) {
    d.clustering = cluster_with_offsets(g, r, Offsets{std::vector<std::int64_t>(g.num_vertices(), 0)});
    d.clustering.params = {p, r, seed};
  } else {
    d.clustering = cluster(g, p, r, seed);
  }
  d.F = sparsify(g, d.clustering);
  d.k = k;
  out.H = spanner_edges(g, d);
  return out;
}

struct CoverageResult {
  std::optional<Edge> uncovered;

  bool ok() const noexcept { return !uncovered.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
};

/// For every edge (u, v): u has an F-edge into v's cluster, or v into u's.
inline CoverageResult verify_coverage(const Graph& g, const SparsifiedDecomposition& d) {
  const auto& center = d.clustering.center;
  std::vector<std::pair<VertexId, VertexId>> reach;  // (vertex, cluster it has an F-edge into)
  reach.reserve(2 * d.F.size());
  for (const auto& e : d.F) {
    reach.push_back({e.u, center[e.v]});
    reach.push_back({e.v, center[e.u]});
  }
  std::sort(reach.begin(), reach.end());
  auto has = [&](VertexId x, VertexId cluster) {
    return std::binary_search(reach.begin(), reach.end(), std::pair{x, cluster});
  };
  for (const auto& e : g.edges()) {
    if (!has(e.u, center[e.v]) && !has(e.v, center[e.u])) return {e};
  }
  return {};
}

struct StretchReport {
  double max_stretch = 1.0;
  /// First edge whose stretch exceeds the bound or whose endpoints H disconnects.
  std::optional<Edge> violation;

  bool ok() const noexcept { return !violation.has_value(); }
};

/// max over edges (u, v) of d_H(u, v) / w(u, v). Bounding every edge bounds
/// the stretch of every pair, since shortest paths decompose into edges.
inline StretchReport verify_stretch(const Graph& g, std::span<const Edge> h_edges, double bound) {
  std::vector<Edge> h_list(h_edges.begin(), h_edges.end());
  for (const auto& e : h_list) {
    const auto w = g.weight(e.u, e.v);
    if (!w || *w != e.w) throw std::invalid_argument("verify_stretch: H is not a subgraph of G");
  }
  const Graph h(g.num_vertices(), std::move(h_list));

  StretchReport report;
  report.max_stretch = g.num_edges() == 0 ? 0.0 : 1.0;
  std::vector<Dist> dist(g.num_vertices(), kUnreachable);
  std::vector<VertexId> touched;
  using Item = std::pair<Dist, VertexId>;
  for (VertexId src = 0; src < g.num_vertices(); ++src) {
    // Only edges (src, v) with v > src are checked from src.
    bool needed = false;
    for (const auto& nb : g.neighbors(src)) needed = needed || nb.id > src;
    if (!needed) continue;

    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src] = 0;
    touched.push_back(src);
    heap.push({0, src});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d != dist[v]) continue;
      for (const auto& nb : h.neighbors(v)) {
        const Dist nd = checked_add(d, nb.w);
        if (nd < dist[nb.id]) {
          if (dist[nb.id] == kUnreachable) touched.push_back(nb.id);
          dist[nb.id] = nd;
          heap.push({nd, nb.id});
        }
      }
    }
    for (const auto& nb : g.neighbors(src)) {
      if (nb.id < src) continue;
      const double stretch = dist[nb.id] == kUnreachable
                                 ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(dist[nb.id]) / static_cast<double>(nb.w);
      report.max_stretch = std::max(report.max_stretch, stretch);
      if (stretch > bound && !report.violation) report.violation = Edge{src, nb.id, nb.w};
    }
    for (VertexId v : touched) dist[v] = kUnreachable;
    touched.clear();
  }
  return report;
}

}  // namespace capclust
