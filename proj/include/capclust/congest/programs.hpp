#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "capclust/clustering.hpp"
#include "capclust/congest/network.hpp"
#include "capclust/distribution.hpp"
#include "capclust/graph.hpp"
#include "capclust/spanner.hpp"

namespace capclust::congest {

/// Hop distances from a source by flooding; a node forwards only after an improvement.
struct FloodBfs {
  VertexId source = 0;

  using Message = Dist;
  struct State {
    Dist dist = kUnreachable;
    bool fresh = false;
    friend bool operator==(const State&, const State&) = default;
  };

  std::size_t rounds(const Graph& g) const { return g.num_vertices(); }
  std::size_t bit_budget(const Graph& g) const { return bits_for(g.num_vertices()); }
  State init(const LocalView& view) const {
    return view.self == source ? State{0, true} : State{};
  }
  void send(const State& s, const LocalView&, std::size_t, Outbox<Message>& out) const {
    if (s.fresh) out.broadcast(s.dist);
  }
  void receive(State& s, const LocalView&, std::size_t, std::span<const Envelope<Message>> inbox) const {
    s.fresh = false;
    for (const auto& env : inbox) {
      if (env.msg + 1 < s.dist) {
        s.dist = env.msg + 1;
        s.fresh = true;
      }
    }
  }
  std::size_t bits(const Message& m) const { return bits_for(static_cast<std::uint64_t>(m)); }
  std::uint64_t digest(const Message& m) const { return static_cast<std::uint64_t>(m); }
};

/// Every node learns the maximum id in its component.
struct LeaderElection {
  using Message = VertexId;
  struct State {
    VertexId leader = kNoVertex;
    bool fresh = false;
    friend bool operator==(const State&, const State&) = default;
  };

  std::size_t rounds(const Graph& g) const { return g.num_vertices(); }
  std::size_t bit_budget(const Graph& g) const { return bits_for(g.num_vertices()); }
  State init(const LocalView& view) const { return {view.self, true}; }
  void send(const State& s, const LocalView&, std::size_t, Outbox<Message>& out) const {
    if (s.fresh) out.broadcast(s.leader);
  }
  void receive(State& s, const LocalView&, std::size_t, std::span<const Envelope<Message>> inbox) const {
    s.fresh = false;
    for (const auto& env : inbox) {
      if (env.msg > s.leader) {
        s.leader = env.msg;
        s.fresh = true;
      }
    }
  }
  std::size_t bits(const Message& m) const { return bits_for(m); }
  std::uint64_t digest(const Message& m) const { return m; }
};

/// The clustering as a CONGEST algorithm.
///
/// Node v starts with the tuple (r - delta_v, v), broadcasts its tuple whenever
/// it improves, and keeps the smallest tuple (distance + edge weight, center)
/// it has heard. It also records the last tuple every neighbor announced, so
/// after the final round it knows its own level and center and those of all
/// its neighbors. Offsets come from the same per-vertex stream as the
/// sequential run.
///
/// In the components regime (r >= n * W on a graph with edges) the sequential
/// clustering returns connected components; the program then orders tuples by
/// center first, so each node learns the minimum id of its component and its
/// distance to it.
struct DistributedClustering {
  double p = 0.5;
  std::int64_t r = 0;
  std::uint64_t seed = 0;
  bool components = false;

  struct Message {
    Dist dist = 0;
    VertexId center = 0;
    friend bool operator==(const Message&, const Message&) = default;
  };
  struct State {
    Dist level = kUnreachable;
    VertexId center = kNoVertex;
    bool fresh = false;
    std::vector<Dist> neighbor_level;  // indexed like the neighbor list
    std::vector<VertexId> neighbor_center;
    friend bool operator==(const State&, const State&) = default;
  };

  std::size_t rounds(const Graph& g) const {
    const std::size_t n = g.num_vertices();
    return std::min<std::size_t>(static_cast<std::size_t>(r) + 1, n);
  }
  std::size_t bit_budget(const Graph& g) const {
    return 2 * ceil_log2(static_cast<std::uint64_t>(g.num_vertices()) + static_cast<std::uint64_t>(r) + 2);
  }

  State init(const LocalView& view) const {
    State s;
    if (components) {
      s.level = 0;
    } else if (p > 0.0 && p < 1.0) {
      s.level = r - sample_offset(GeomCapParams(p, r), seed, view.self);
    } else {
      s.level = r;  // a lone vertex may carry p = 0; its offset is 0
    }
    s.center = view.self;
    s.fresh = true;
    s.neighbor_level.assign(view.neighbors.size(), kUnreachable);
    s.neighbor_center.assign(view.neighbors.size(), kNoVertex);
    return s;
  }

  void send(const State& s, const LocalView&, std::size_t, Outbox<Message>& out) const {
    if (s.fresh) out.broadcast({s.level, s.center});
  }

  void receive(State& s, const LocalView& view, std::size_t, std::span<const Envelope<Message>> inbox) const {
    s.fresh = false;
    for (const auto& env : inbox) {
      const auto idx = view.index_of(env.from);
      s.neighbor_level[idx] = env.msg.dist;
      s.neighbor_center[idx] = env.msg.center;
      const Message cand{checked_add(env.msg.dist, view.neighbors[idx].w), env.msg.center};
      if (better(cand, {s.level, s.center})) {
        s.level = cand.dist;
        s.center = cand.center;
        s.fresh = true;
      }
    }
  }

  bool better(const Message& a, const Message& b) const {
    if (components) return a.center != b.center ? a.center < b.center : a.dist < b.dist;
    return a.dist != b.dist ? a.dist < b.dist : a.center < b.center;
  }

  std::size_t bits(const Message& m) const {
    return bits_for(static_cast<std::uint64_t>(m.dist)) + bits_for(m.center);
  }
  std::uint64_t digest(const Message& m) const {
    return mix64(static_cast<std::uint64_t>(m.dist) * kGoldenGamma + m.center);
  }
};

/// Program whose final states reassemble into cluster(g, p, r, seed).
inline DistributedClustering distributed_cluster_program(const Graph& g, double p, std::int64_t r,
                                                         std::uint64_t seed) {
  if (r < 0) throw std::invalid_argument("distributed clustering: r must be >= 0");
  if (g.num_vertices() > 1) (void)GeomCapParams(p, r);
  return {p, r, seed, capclust::detail::components_regime(g, r)};
}

/// Parent chosen by the fixed-path rule from a node's local knowledge.
inline VertexId local_parent(const LocalView& view, const DistributedClustering::State& s) {
  if (s.center == view.self) return kNoVertex;
  for (std::size_t i = 0; i < view.neighbors.size(); ++i) {
    if (s.neighbor_center[i] == s.center && s.neighbor_level[i] != kUnreachable &&
        s.neighbor_level[i] + view.neighbors[i].w == s.level) {
      return view.neighbors[i].id;
    }
  }
  return kNoVertex;
}

inline Clustering reassemble_clustering(const Graph& g, std::span<const DistributedClustering::State> states,
                                        const DistributedClustering& prog) {
  if (states.size() != g.num_vertices()) throw std::invalid_argument("reassemble_clustering: size mismatch");
  const auto views = local_views(g);
  Clustering c;
  c.center.reserve(states.size());
  for (VertexId v = 0; v < states.size(); ++v) {
    c.center.push_back(states[v].center);
    c.level.push_back(states[v].level);
    c.parent.push_back(local_parent(views[v], states[v]));
  }
  c.params = {prog.p, prog.r, prog.seed};
  return c;
}

/// Every node's record of each neighbor matches that neighbor's final level and center.
inline bool neighbor_knowledge_consistent(const Graph& g, std::span<const DistributedClustering::State> states) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto nbs = g.neighbors(v);
    for (std::size_t i = 0; i < nbs.size(); ++i) {
      if (states[v].neighbor_level[i] != states[nbs[i].id].level) return false;
      if (states[v].neighbor_center[i] != states[nbs[i].id].center) return false;
    }
  }
  return true;
}

/// One round after the clustering: each node tells its support-forest parent
/// that it is a child, and tells both endpoints of each F-edge it selected.
struct AnnounceForest {
  std::span<const DistributedClustering::State> clustering;

  struct Message {
    bool child = false;
    bool f_edge = false;
    friend bool operator==(const Message&, const Message&) = default;
  };
  struct State {
    VertexId parent = kNoVertex;
    std::vector<VertexId> children;
    std::vector<VertexId> f_neighbors;  // sorted; both selected and selecting
    friend bool operator==(const State&, const State&) = default;
  };

  std::size_t rounds(const Graph&) const { return 1; }
  std::size_t bit_budget(const Graph&) const { return 2; }

  State init(const LocalView& view) const {
    State s;
    s.parent = local_parent(view, clustering[view.self]);
    s.f_neighbors = selected(view);
    return s;
  }

  void send(const State& s, const LocalView& view, std::size_t, Outbox<Message>& out) const {
    const auto chosen = selected(view);
    for (const auto& nb : view.neighbors) {
      Message m{nb.id == s.parent, std::binary_search(chosen.begin(), chosen.end(), nb.id)};
      if (m.child || m.f_edge) out.send(nb.id, m);
    }
  }

  void receive(State& s, const LocalView&, std::size_t, std::span<const Envelope<Message>> inbox) const {
    for (const auto& env : inbox) {
      if (env.msg.child) s.children.push_back(env.from);
      if (env.msg.f_edge) s.f_neighbors.push_back(env.from);
    }
    std::sort(s.children.begin(), s.children.end());
    std::sort(s.f_neighbors.begin(), s.f_neighbors.end());
    s.f_neighbors.erase(std::unique(s.f_neighbors.begin(), s.f_neighbors.end()), s.f_neighbors.end());
  }

  std::size_t bits(const Message&) const { return 2; }
  std::uint64_t digest(const Message& m) const { return (m.child ? 1u : 0u) | (m.f_edge ? 2u : 0u); }

 private:
  std::vector<VertexId> selected(const LocalView& view) const {
    const auto& s = clustering[view.self];
    std::vector<NeighborState> nbs;
    nbs.reserve(view.neighbors.size());
    for (std::size_t i = 0; i < view.neighbors.size(); ++i) {
      nbs.push_back({view.neighbors[i].id, s.neighbor_level[i], s.neighbor_center[i]});
    }
    return sparsify_rule(s.level, s.center, nbs);
  }
};

}  // namespace capclust::congest
