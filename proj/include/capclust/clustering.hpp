#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "capclust/distribution.hpp"
#include "capclust/graph.hpp"

namespace capclust {

/// Provenance of a clustering. `p` is 0 when the offsets were supplied directly.
struct ClusteringParams {
  double p = 0.0;
  std::int64_t r = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ClusteringParams&, const ClusteringParams&) = default;
};

/// Output of the ball-growing clustering.
///
/// level[v] is the distance from the virtual source in the augmented graph,
/// center[v] the cluster center, parent[v] the support-forest parent
/// (kNoVertex for centers).
struct Clustering {
  std::vector<VertexId> center;
  std::vector<Dist> level;
  std::vector<VertexId> parent;
  ClusteringParams params;

  std::size_t size() const noexcept { return center.size(); }
  bool is_center(VertexId v) const { return center[v] == v; }

  std::vector<VertexId> centers() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < center.size(); ++v) {
      if (center[v] == v) out.push_back(v);
    }
    return out;
  }

  std::size_t num_clusters() const { return centers().size(); }

  /// Edges (parent[v], v) of the support forest.
  std::vector<Edge> support_forest(const Graph& g) const {
    std::vector<Edge> out;
    for (VertexId v = 0; v < parent.size(); ++v) {
      if (parent[v] != kNoVertex) out.push_back({std::min(v, parent[v]), std::max(v, parent[v]), *g.weight(v, parent[v])});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Lexicographic search key: (distance to the virtual source, originating center).
struct SourceKey {
  Dist dist = kUnreachable;
  VertexId center = kNoVertex;

  friend auto operator<=>(const SourceKey&, const SourceKey&) = default;
};

namespace detail {

struct Levels {
  std::vector<Dist> level;
  std::vector<VertexId> center;
};

// Priority-queue search over lexicographic keys. Sources carry an initial key,
// every other vertex starts unreached. Since (a, c) < (b, c') implies
// (a + w, c) < (b + w, c'), Dijkstra's settling argument carries over.
inline Levels lexicographic_search(const Graph& g, const std::vector<SourceKey>& initial) {
  const std::size_t n = g.num_vertices();
  std::vector<SourceKey> best = initial;
  using Item = std::pair<SourceKey, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (VertexId v = 0; v < n; ++v) {
    if (best[v].center != kNoVertex) heap.push({best[v], v});
  }
  while (!heap.empty()) {
    auto [key, v] = heap.top();
    heap.pop();
    if (key != best[v]) continue;
    for (const auto& nb : g.neighbors(v)) {
      const SourceKey cand{checked_add(key.dist, nb.w), key.center};
      if (cand < best[nb.id]) {
        best[nb.id] = cand;
        heap.push({cand, nb.id});
      }
    }
  }
  Levels out;
  out.level.resize(n);
  out.center.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    out.level[v] = best[v].dist;
    out.center[v] = best[v].center;
  }
  return out;
}

// Unit weights only: frontier-by-frontier BFS. Sources enter the frontier at
// their initial level; each layer resolves competing centers by minimum id.
inline Levels layered_search(const Graph& g, const std::vector<SourceKey>& initial) {
  const std::size_t n = g.num_vertices();
  Levels out{std::vector<Dist>(n, kUnreachable), std::vector<VertexId>(n, kNoVertex)};

  std::vector<VertexId> pending;
  for (VertexId v = 0; v < n; ++v) {
    if (initial[v].center != kNoVertex) pending.push_back(v);
  }
  std::sort(pending.begin(), pending.end(),
            [&](VertexId a, VertexId b) { return initial[a] < initial[b]; });
  std::size_t next_source = 0;

  std::vector<VertexId> frontier;
  std::vector<VertexId> candidates;
  std::vector<VertexId> best_center(n, kNoVertex);
  Dist layer = 0;
  while (true) {
    // Candidates for this layer: neighbors of the previous frontier, plus
    // sources whose own key lands on this layer.
    candidates.clear();
    for (VertexId v : frontier) {
      for (const auto& nb : g.neighbors(v)) {
        if (out.level[nb.id] != kUnreachable) continue;
        if (best_center[nb.id] == kNoVertex) candidates.push_back(nb.id);
        best_center[nb.id] = std::min(best_center[nb.id], out.center[v]);
      }
    }
    if (candidates.empty() && frontier.empty()) {
      while (next_source < pending.size() && out.level[pending[next_source]] != kUnreachable) ++next_source;
      if (next_source == pending.size()) break;
      layer = initial[pending[next_source]].dist;
    }
    for (; next_source < pending.size() && initial[pending[next_source]].dist == layer; ++next_source) {
      const VertexId v = pending[next_source];
      if (out.level[v] != kUnreachable) continue;
      if (best_center[v] == kNoVertex) candidates.push_back(v);
      best_center[v] = std::min(best_center[v], initial[v].center);
    }
    frontier.clear();
    for (VertexId v : candidates) {
      out.level[v] = layer;
      out.center[v] = best_center[v];
      best_center[v] = kNoVertex;
      frontier.push_back(v);
    }
    if (frontier.empty() && next_source == pending.size()) break;
    layer = checked_add(layer, 1);
  }
  return out;
}

// Fixed-path rule: minimum-id neighbor in the same cluster one edge closer to the source.
inline std::vector<VertexId> support_parents(const Graph& g, const std::vector<VertexId>& center,
                                             const std::vector<Dist>& level) {
  std::vector<VertexId> parent(g.num_vertices(), kNoVertex);
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    if (center[x] == x || center[x] == kNoVertex) continue;
    for (const auto& nb : g.neighbors(x)) {
      if (center[nb.id] == center[x] && level[nb.id] + nb.w == level[x]) {
        parent[x] = nb.id;
        break;
      }
    }
  }
  return parent;
}

inline bool components_regime(const Graph& g, std::int64_t r) {
  if (g.num_edges() == 0) return false;
  std::int64_t bound = 0;
  if (__builtin_mul_overflow(static_cast<std::int64_t>(g.num_vertices()), g.max_weight(), &bound)) return false;
  return r >= bound;
}

}  // namespace detail

/// Clusters G given explicit offsets.
///
/// level[x] = min_u (r - delta[u] + d_G(u, x)); center[x] is the minimum id u
/// attaining it. Unit-weight graphs use the layered search, weighted graphs the
/// lexicographic priority-queue search; both produce the same result.
inline Clustering cluster_with_offsets(const Graph& g, std::int64_t r, const Offsets& delta) {
  const std::size_t n = g.num_vertices();
  if (delta.size() != n) throw std::invalid_argument("cluster_with_offsets: offsets size mismatch");
  if (r < 0) throw std::invalid_argument("cluster_with_offsets: r must be >= 0");
  std::vector<SourceKey> initial(n);
  for (VertexId v = 0; v < n; ++v) {
    if (delta[v] < 0 || delta[v] > r) throw std::invalid_argument("cluster_with_offsets: offset outside [0, r]");
    initial[v] = {r - delta[v], v};
  }
  auto levels = g.unweighted() ? detail::layered_search(g, initial) : detail::lexicographic_search(g, initial);

  Clustering out;
  out.parent = detail::support_parents(g, levels.center, levels.level);
  out.center = std::move(levels.center);
  out.level = std::move(levels.level);
  out.params.r = r;
  return out;
}

/// One cluster per connected component, centered at its minimum id.
///
/// Levels are distances from the center; parents follow the same fixed-path rule.
inline Clustering component_clustering(const Graph& g, std::int64_t r) {
  const auto label = connected_components(g);
  std::vector<SourceKey> initial(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (label[v] == v) initial[v] = {0, v};
  }
  auto levels = detail::lexicographic_search(g, initial);
  Clustering out;
  out.parent = detail::support_parents(g, levels.center, levels.level);
  out.center = std::move(levels.center);
  out.level = std::move(levels.level);
  out.params.r = r;
  return out;
}

/// Samples offsets from GeomCap(p, r) and clusters.
///
/// When r >= n * W (and G has edges) the cap exceeds every possible distance
/// and the connected components are returned instead.
inline Clustering cluster(const Graph& g, double p, std::int64_t r, std::uint64_t seed) {
  const GeomCapParams params(p, r);
  Clustering out = detail::components_regime(g, r)
                       ? component_clustering(g, r)
                       : cluster_with_offsets(g, r, sample_offsets(params, g.num_vertices(), seed));
  out.params = {p, r, seed};
  return out;
}

struct StrongDiameter {
  /// (center, diameter of the induced cluster subgraph), ordered by center.
  std::vector<std::pair<VertexId, Dist>> per_cluster;
  Dist max = 0;
  /// Center of the first cluster whose induced subgraph is disconnected.
  std::optional<VertexId> disconnected;
};

/// Exact diameter of every cluster measured inside the induced subgraph.
inline StrongDiameter strong_diameter(const Graph& g, const Clustering& c) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<VertexId>> members(n);
  for (VertexId v = 0; v < n; ++v) members[c.center[v]].push_back(v);

  StrongDiameter out;
  std::vector<Dist> dist(n, kUnreachable);
  using Item = std::pair<Dist, VertexId>;
  for (VertexId ctr = 0; ctr < n; ++ctr) {
    const auto& cluster = members[ctr];
    if (cluster.empty()) continue;
    Dist diameter = 0;
    for (VertexId src : cluster) {
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[src] = 0;
      heap.push({0, src});
      while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d != dist[v]) continue;
        for (const auto& nb : g.neighbors(v)) {
          if (c.center[nb.id] != ctr) continue;
          const Dist nd = checked_add(d, nb.w);
          if (nd < dist[nb.id]) {
            dist[nb.id] = nd;
            heap.push({nd, nb.id});
          }
        }
      }
      for (VertexId v : cluster) {
        if (dist[v] == kUnreachable) {
          if (!out.disconnected) out.disconnected = ctr;
        } else {
          diameter = std::max(diameter, dist[v]);
        }
        dist[v] = kUnreachable;
      }
    }
    out.per_cluster.push_back({ctr, diameter});
    out.max = std::max(out.max, diameter);
  }
  return out;
}

struct Violation {
  VertexId vertex = kNoVertex;
  std::string invariant;
};

/// Result of an invariant check: empty on success, otherwise the first violation found.
struct CheckResult {
  std::optional<Violation> violation;

  bool ok() const noexcept { return !violation.has_value(); }
  explicit operator bool() const noexcept { return ok(); }

  static CheckResult fail(VertexId v, std::string what) { return {Violation{v, std::move(what)}}; }
};

/// Checks every structural invariant of a clustering: centers are their own
/// centers, levels lie in [0, r], parents are same-cluster neighbors exactly one
/// edge weight closer to the source, and every parent chain reaches its center
/// within total weight r.
inline CheckResult verify_tree_support(const Graph& g, const Clustering& c) {
  const std::size_t n = g.num_vertices();
  const std::int64_t r = c.params.r;
  if (c.center.size() != n || c.level.size() != n || c.parent.size() != n) {
    return CheckResult::fail(kNoVertex, "array sizes differ from vertex count");
  }
  for (VertexId v = 0; v < n; ++v) {
    const VertexId ctr = c.center[v];
    if (ctr >= n) return CheckResult::fail(v, "center out of range");
    if (c.center[ctr] != ctr) return CheckResult::fail(v, "center is not its own center");
    if (c.level[v] < 0 || c.level[v] > r) return CheckResult::fail(v, "level outside [0, r]");
    const VertexId par = c.parent[v];
    if (ctr == v) {
      if (par != kNoVertex) return CheckResult::fail(v, "cluster center has a parent");
      continue;
    }
    if (par == kNoVertex) return CheckResult::fail(v, "non-center vertex has no parent");
    if (par >= n) return CheckResult::fail(v, "parent out of range");
    const auto w = g.weight(v, par);
    if (!w) return CheckResult::fail(v, "parent is not adjacent");
    if (c.center[par] != ctr) return CheckResult::fail(v, "parent lies in another cluster");
    if (c.level[par] != c.level[v] - *w) return CheckResult::fail(v, "parent level is not level - w");
  }
  // Parent levels strictly decrease, so every chain is finite.
  for (VertexId v = 0; v < n; ++v) {
    Dist height = 0;
    VertexId x = v;
    while (c.parent[x] != kNoVertex) {
      height += *g.weight(x, c.parent[x]);
      x = c.parent[x];
    }
    if (x != c.center[v]) return CheckResult::fail(v, "parent chain ends outside the cluster center");
    if (height > r) return CheckResult::fail(v, "support tree height exceeds r");
  }
  return {};
}

/// Maximum total weight from any vertex to its center along parent pointers.
inline Dist support_forest_height(const Graph& g, const Clustering& c) {
  Dist best = 0;
  for (VertexId v = 0; v < c.size(); ++v) {
    Dist h = 0;
    for (VertexId x = v; c.parent[x] != kNoVertex; x = c.parent[x]) h += *g.weight(x, c.parent[x]);
    best = std::max(best, h);
  }
  return best;
}

}  // namespace capclust
