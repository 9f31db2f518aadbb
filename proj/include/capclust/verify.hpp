#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "capclust/clustering.hpp"
#include "capclust/distribution.hpp"
#include "capclust/graph.hpp"

// Deliberately slow reference implementations. None of them share code paths
// with the production searches in clustering.hpp / spanner.hpp.

namespace capclust {

__extension__ using Int128 = __int128;

/// The tie-broken source distance r - delta + id / (n + 1), kept as the exact
/// pair (integer part, id). Pair order coincides with rational order because id < n + 1.
struct FractionalKey {
  Dist whole = 0;
  VertexId id = 0;

  friend auto operator<=>(const FractionalKey&, const FractionalKey&) = default;

  /// Numerator of the value over the common denominator n + 1.
  Int128 scaled(std::size_t n) const {
    return static_cast<Int128>(whole) * static_cast<Int128>(n + 1) + id;
  }
};

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, kUnreachable) {}

  std::size_t size() const noexcept { return n_; }
  Dist operator()(VertexId u, VertexId v) const { return d_[static_cast<std::size_t>(u) * n_ + v]; }
  Dist& at(VertexId u, VertexId v) { return d_[static_cast<std::size_t>(u) * n_ + v]; }

 private:
  std::size_t n_ = 0;
  std::vector<Dist> d_;
};

inline constexpr std::size_t kDefaultApspCap = 2000;

/// All-pairs shortest paths by Floyd–Warshall.
inline DistanceMatrix apsp(const Graph& g, std::size_t cap = kDefaultApspCap) {
  const std::size_t n = g.num_vertices();
  if (n > cap) {
    throw std::length_error("apsp: " + std::to_string(n) + " vertices exceeds cap " + std::to_string(cap));
  }
  DistanceMatrix d(n);
  for (VertexId v = 0; v < n; ++v) d.at(v, v) = 0;
  for (const auto& e : g.edges()) {
    d.at(e.u, e.v) = std::min(d(e.u, e.v), e.w);
    d.at(e.v, e.u) = std::min(d(e.v, e.u), e.w);
  }
  for (VertexId k = 0; k < n; ++k) {
    for (VertexId i = 0; i < n; ++i) {
      const Dist dik = d(i, k);
      if (dik == kUnreachable) continue;
      for (VertexId j = 0; j < n; ++j) {
        const Dist dkj = d(k, j);
        if (dkj == kUnreachable) continue;
        const Dist via = checked_add(dik, dkj);
        if (via < d(i, j)) d.at(i, j) = via;
      }
    }
  }
  return d;
}

/// Reference clustering from an explicit virtual source.
///
/// Builds the augmented graph with source s = n and edge weights
/// w(s, v) = r - delta_v + id(v) / (n + 1), scales every weight by n + 1 so
/// all arithmetic is integral, runs an O(n^2) array Dijkstra from s and reads
/// each vertex's center off the shortest-path tree. Returns center and level;
/// parents are left unset.
inline Clustering oracle_cluster_fractional(const Graph& g, std::int64_t r, const Offsets& delta) {
  const std::size_t n = g.num_vertices();
  const VertexId source = static_cast<VertexId>(n);
  const auto scale = static_cast<Int128>(n) + 1;

  // Dense adjacency of the augmented graph (n + 1 vertices).
  const std::size_t total = n + 1;
  std::vector<Int128> weight(total * total, -1);
  auto w_at = [&](std::size_t a, std::size_t b) -> Int128& { return weight[a * total + b]; };
  for (const auto& e : g.edges()) {
    w_at(e.u, e.v) = static_cast<Int128>(e.w) * scale;
    w_at(e.v, e.u) = static_cast<Int128>(e.w) * scale;
  }
  for (VertexId v = 0; v < n; ++v) {
    w_at(source, v) = FractionalKey{r - delta[v], v}.scaled(n);
  }

  constexpr Int128 kInf = static_cast<Int128>(1) << 120;
  std::vector<Int128> dist(total, kInf);
  std::vector<VertexId> pred(total, kNoVertex);
  std::vector<bool> done(total, false);
  dist[source] = 0;
  for (std::size_t iter = 0; iter < total; ++iter) {
    std::size_t best = total;
    for (std::size_t v = 0; v < total; ++v) {
      if (!done[v] && dist[v] < kInf && (best == total || dist[v] < dist[best])) best = v;
    }
    if (best == total) break;
    done[best] = true;
    for (std::size_t v = 0; v < total; ++v) {
      const Int128 w = w_at(best, v);
      if (w < 0 || done[v]) continue;
      if (dist[best] + w < dist[v]) {
        dist[v] = dist[best] + w;
        pred[v] = static_cast<VertexId>(best);
      }
    }
  }

  Clustering out;
  out.center.resize(n);
  out.level.resize(n);
  out.parent.assign(n, kNoVertex);
  out.params.r = r;
  for (VertexId x = 0; x < n; ++x) {
    VertexId y = x;
    while (pred[y] != source) y = pred[y];
    out.center[x] = y;
    out.level[x] = static_cast<Dist>(dist[x] / scale);
  }
  return out;
}

/// Brute-force check that levels are optimal over all candidate centers and
/// that centers are the minimum-id optimizers.
inline CheckResult check_level_optimality(const Graph& g, std::int64_t r, const Offsets& delta,
                                          const Clustering& c, const DistanceMatrix& d) {
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    Dist best = kUnreachable;
    VertexId arg = kNoVertex;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      if (d(u, x) == kUnreachable) continue;
      const Dist via = r - delta[u] + d(u, x);
      if (via < best) {
        best = via;
        arg = u;
      }
    }
    if (c.level[x] != best) return CheckResult::fail(x, "level is not min_u(r - delta_u + d(u, x))");
    if (c.center[x] != arg) return CheckResult::fail(x, "center is not the minimum-id optimizer");
  }
  return {};
}

/// Every possible edge the literal per-vertex set C(x) can contain:
///   {(x, p_u(x)) : d^(u)(s, x) = level(x)}
///   U {(x, p_u(x)) : d^(u)(s, x) = level(x) + 1 and id(u) < id(c_x)}
/// taken over all u in V and every admissible shortest-path predecessor p_u(x).
/// Returns the sorted set of far endpoints p.
inline std::vector<VertexId> brute_force_Cx(const Graph& g, std::int64_t r, const Offsets& delta,
                                            const Clustering& c, VertexId x, const DistanceMatrix& d) {
  std::vector<VertexId> out;
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    if (u == x || d(u, x) == kUnreachable) continue;
    const Dist via = r - delta[u] + d(u, x);
    const bool tight = via == c.level[x];
    const bool one_above = via == c.level[x] + 1 && u < c.center[x];
    if (!tight && !one_above) continue;
    for (const auto& nb : g.neighbors(x)) {
      if (d(u, nb.id) != kUnreachable && d(u, nb.id) + nb.w == d(u, x)) out.push_back(nb.id);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<VertexId> brute_force_Cx(const Graph& g, std::int64_t r, const Offsets& delta,
                                            const Clustering& c, VertexId x) {
  return brute_force_Cx(g, r, delta, c, x, apsp(g));
}

}  // namespace capclust
