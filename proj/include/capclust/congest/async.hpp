#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capclust/congest/network.hpp"
#include "capclust/graph.hpp"
#include "capclust/spanner.hpp"

namespace capclust::congest {

enum class Synchronizer { alpha, beta, gamma };

inline std::string_view to_string(Synchronizer s) {
  switch (s) {
    case Synchronizer::alpha: return "alpha";
    case Synchronizer::beta: return "beta";
    case Synchronizer::gamma: return "gamma";
  }
  return "unknown";
}

inline Synchronizer parse_synchronizer(std::string_view name) {
  if (name == "alpha" || name == "a") return Synchronizer::alpha;
  if (name == "beta" || name == "b") return Synchronizer::beta;
  if (name == "gamma" || name == "g") return Synchronizer::gamma;
  throw std::invalid_argument("unknown synchronizer '" + std::string(name) + "'");
}

/// Rooted trees the tree-based synchronizers aggregate over, plus (gamma only)
/// the inter-cluster links each node reports over.
struct SyncTopology {
  std::vector<VertexId> parent;  // kNoVertex at roots
  std::vector<std::vector<VertexId>> children;
  std::vector<std::vector<VertexId>> links;
  Dist height = 0;  // in hops

  std::size_t num_tree_edges() const {
    return static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](VertexId p) { return p != kNoVertex; }));
  }
  std::size_t num_links() const {
    std::size_t s = 0;
    for (const auto& l : links) s += l.size();
    return s / 2;
  }
};

namespace detail {

inline void finish_topology(SyncTopology& topo) {
  const std::size_t n = topo.parent.size();
  topo.children.assign(n, {});
  for (VertexId v = 0; v < n; ++v) {
    if (topo.parent[v] != kNoVertex) topo.children[topo.parent[v]].push_back(v);
  }
  topo.height = 0;
  for (VertexId v = 0; v < n; ++v) {
    Dist depth = 0;
    for (VertexId x = v; topo.parent[x] != kNoVertex; x = topo.parent[x]) ++depth;
    topo.height = std::max(topo.height, depth);
  }
  if (topo.links.size() != n) topo.links.assign(n, {});
}

}  // namespace detail

/// BFS spanning forest rooted at the minimum id of every component (synchronizer beta).
inline SyncTopology bfs_forest_topology(const Graph& g) {
  const std::size_t n = g.num_vertices();
  SyncTopology topo;
  topo.parent.assign(n, kNoVertex);
  std::vector<bool> seen(n, false);
  std::vector<VertexId> queue;
  for (VertexId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      for (const auto& nb : g.neighbors(v)) {
        if (!seen[nb.id]) {
          seen[nb.id] = true;
          topo.parent[nb.id] = v;
          queue.push_back(nb.id);
        }
      }
    }
  }
  detail::finish_topology(topo);
  return topo;
}

/// Cluster trees from the support forest; links are the F-edges whose
/// endpoints lie in different clusters (synchronizer gamma).
inline SyncTopology gamma_topology(const Graph& g, const SparsifiedDecomposition& d) {
  const std::size_t n = g.num_vertices();
  const auto& c = d.clustering;
  if (c.size() != n) throw std::invalid_argument("gamma_topology: decomposition does not match graph");
  SyncTopology topo;
  topo.parent = c.parent;
  topo.links.assign(n, {});
  for (const auto& e : d.F) {
    if (!g.has_edge(e.u, e.v)) throw std::invalid_argument("gamma_topology: F-edge not in graph");
    if (c.center[e.u] == c.center[e.v]) continue;
    topo.links[e.u].push_back(e.v);
    topo.links[e.v].push_back(e.u);
  }
  for (auto& l : topo.links) std::sort(l.begin(), l.end());
  for (VertexId v = 0; v < n; ++v) {
    if (topo.parent[v] != kNoVertex && !g.has_edge(v, topo.parent[v])) {
      throw std::invalid_argument("gamma_topology: support-forest edge not in graph");
    }
  }
  detail::finish_topology(topo);
  return topo;
}

namespace detail {

// Event-driven execution of a synchronous program under a synchronizer.
//
// Each node simulates rounds 1..R. In round t it emits the program's round-t
// messages; every algorithm message is acknowledged and a node whose messages
// are all acknowledged is safe. When the synchronizer certifies that all its
// neighbors are safe, the node hands its round-t inbox to the program and
// starts round t + 1. Neighbors are never more than one round apart, so
// per-round bookkeeping is kept in a small map keyed by round.
template <NodeProgram P>
class AsyncEngine {
  using Message = typename P::Message;
  using State = typename P::State;

  struct Packet {
    double time;
    std::uint64_t seq;
    VertexId from;
    VertexId to;
    EventKind kind;
    std::size_t round;
    std::optional<Message> payload;
  };
  struct Later {
    bool operator()(const Packet& a, const Packet& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  struct RoundState {
    std::vector<Envelope<Message>> inbox;
    std::size_t sent = 0;
    std::size_t acked = 0;
    bool started = false;
    bool self_safe = false;
    std::size_t neighbor_safe = 0;  // alpha
    std::size_t children_safe = 0;
    bool sent_safe_up = false;
    bool cluster_safe = false;  // gamma; for beta this is the go signal
    bool sent_across = false;
    std::size_t across_safe = 0;
    std::size_t children_ready = 0;
    bool sent_ready_up = false;
    bool released = false;
  };

  struct Node {
    std::size_t round = 1;
    std::map<std::size_t, RoundState> per_round;
  };

 public:
  AsyncEngine(const P& prog, const Graph& g, Synchronizer sync, const DelaySchedule& schedule,
              std::optional<SyncTopology> topo, SimOptions opts)
      : prog_(prog),
        g_(g),
        sync_(sync),
        schedule_(schedule),
        topo_(std::move(topo)),
        opts_(opts),
        views_(local_views(g)),
        nodes_(g.num_vertices()),
        rounds_(prog.rounds(g)),
        budget_(prog.bit_budget(g)),
        next_index_(opts.first_msg_index) {}

  RunResult<State> run() {
    const std::size_t n = g_.num_vertices();
    result_.transcript.recorded = opts_.record_events;
    result_.states.reserve(n);
    for (VertexId v = 0; v < n; ++v) result_.states.push_back(prog_.init(views_[v]));
    result_.transcript.counters.round_completion.assign(rounds_, 0.0);
    if (rounds_ > 0) {
      for (VertexId v = 0; v < n; ++v) {
        start_round(v, 1);
        progress(v);
      }
    }
    std::uint64_t processed = 0;
    while (!queue_.empty()) {
      Packet pkt = queue_.top();
      queue_.pop();
      if (++processed > opts_.event_cap) {
        throw EventCapExceeded("event cap of " + std::to_string(opts_.event_cap) + " exceeded");
      }
      now_ = pkt.time;
      deliver(pkt);
      progress(pkt.to);
    }
    for (VertexId v = 0; v < n; ++v) {
      if (nodes_[v].round <= rounds_) {
        throw SimulatorError("node " + std::to_string(v) + " stalled in round " + std::to_string(nodes_[v].round));
      }
    }
    auto& c = result_.transcript.counters;
    c.rounds = rounds_;
    c.sim_time = now_;
    return std::move(result_);
  }

 private:
  std::size_t num_children(VertexId v) const { return topo_ ? topo_->children[v].size() : 0; }
  std::size_t num_links(VertexId v) const { return topo_ ? topo_->links[v].size() : 0; }
  bool is_root(VertexId v) const { return !topo_ || topo_->parent[v] == kNoVertex; }

  void post(VertexId from, VertexId to, EventKind kind, std::size_t round, std::optional<Message> payload = {}) {
    const std::uint64_t index = next_index_++;
    const double delay = schedule_.delay(index);
    auto& c = result_.transcript.counters;
    if (kind == EventKind::algorithm) {
      ++c.alg_msgs;
    } else if (kind == EventKind::ack) {
      ++c.ack_msgs;
    } else {
      ++c.sync_msgs;
    }
    queue_.push({now_ + delay, index, from, to, kind, round, std::move(payload)});
  }

  void start_round(VertexId v, std::size_t t) {
    auto& rs = nodes_[v].per_round[t];
    rs.started = true;
    Outbox<Message> out(views_[v]);
    prog_.send(result_.states[v], views_[v], t, out);
    for (const auto& [to, msg] : out.messages()) {
      const std::size_t bits = prog_.bits(msg);
      if (bits > budget_) {
        throw BitBudgetExceeded("payload of " + std::to_string(bits) + " bits exceeds budget " +
                                std::to_string(budget_));
      }
      auto& c = result_.transcript.counters;
      c.max_payload_bits = std::max(c.max_payload_bits, bits);
      post(v, to, EventKind::algorithm, t, msg);
      ++rs.sent;
    }
    if (rs.sent == 0) become_safe(v, t);
  }

  void become_safe(VertexId v, std::size_t t) {
    auto& rs = nodes_[v].per_round[t];
    rs.self_safe = true;
    if (sync_ == Synchronizer::alpha) {
      for (const auto& nb : g_.neighbors(v)) post(v, nb.id, EventKind::safe, t);
    }
  }

  void deliver(Packet& pkt) {
    auto& tr = result_.transcript;
    if (tr.recorded) {
      const std::uint64_t digest = pkt.payload ? prog_.digest(*pkt.payload) : 0;
      tr.events.push_back({pkt.time, pkt.to, pkt.from, pkt.kind, pkt.round, digest});
    }
    const VertexId v = pkt.to;
    auto& rs = nodes_[v].per_round[pkt.round];
    switch (pkt.kind) {
      case EventKind::algorithm:
        rs.inbox.push_back({pkt.from, std::move(*pkt.payload)});
        post(v, pkt.from, EventKind::ack, pkt.round);
        break;
      case EventKind::ack:
        if (++rs.acked == rs.sent) become_safe(v, pkt.round);
        break;
      case EventKind::safe: ++rs.neighbor_safe; break;
      case EventKind::safe_up: ++rs.children_safe; break;
      case EventKind::go:
      case EventKind::cluster_safe: rs.cluster_safe = true; break;
      case EventKind::safe_across: ++rs.across_safe; break;
      case EventKind::ready_up: ++rs.children_ready; break;
      case EventKind::cluster_ready: rs.released = true; break;
    }
  }

  void send_to_children(VertexId v, EventKind kind, std::size_t t) {
    for (VertexId child : topo_->children[v]) post(v, child, kind, t);
  }

  // Advances v through as many rounds as its synchronizer currently permits.
  void progress(VertexId v) {
    auto& node = nodes_[v];
    while (node.round <= rounds_) {
      const std::size_t t = node.round;
      auto& rs = node.per_round[t];
      bool release = false;
      switch (sync_) {
        case Synchronizer::alpha:
          release = rs.self_safe && rs.neighbor_safe == g_.degree(v);
          break;
        case Synchronizer::beta:
          if (rs.self_safe && !rs.sent_safe_up && rs.children_safe == num_children(v)) {
            rs.sent_safe_up = true;
            if (is_root(v)) {
              rs.cluster_safe = true;
            } else {
              post(v, topo_->parent[v], EventKind::safe_up, t);
            }
          }
          if (rs.cluster_safe) {
            send_to_children(v, EventKind::go, t);
            release = true;
          }
          break;
        case Synchronizer::gamma:
          if (rs.self_safe && !rs.sent_safe_up && rs.children_safe == num_children(v)) {
            rs.sent_safe_up = true;
            if (is_root(v)) {
              rs.cluster_safe = true;
            } else {
              post(v, topo_->parent[v], EventKind::safe_up, t);
            }
          }
          if (rs.cluster_safe && !rs.sent_across) {
            rs.sent_across = true;
            send_to_children(v, EventKind::cluster_safe, t);
            for (VertexId peer : topo_->links[v]) post(v, peer, EventKind::safe_across, t);
          }
          if (rs.cluster_safe && rs.across_safe == num_links(v) && !rs.sent_ready_up &&
              rs.children_ready == num_children(v)) {
            rs.sent_ready_up = true;
            if (is_root(v)) {
              rs.released = true;
            } else {
              post(v, topo_->parent[v], EventKind::ready_up, t);
            }
          }
          if (rs.released) {
            send_to_children(v, EventKind::cluster_ready, t);
            release = true;
          }
          break;
      }
      if (!release) return;
      finish_round(v, t);
    }
  }

  void finish_round(VertexId v, std::size_t t) {
    auto& node = nodes_[v];
    auto inbox = std::move(node.per_round[t].inbox);
    node.per_round.erase(t);
    std::sort(inbox.begin(), inbox.end(), [](const auto& a, const auto& b) { return a.from < b.from; });
    prog_.receive(result_.states[v], views_[v], t, std::span<const Envelope<Message>>(inbox));
    auto& completion = result_.transcript.counters.round_completion[t - 1];
    completion = std::max(completion, now_);
    node.round = t + 1;
    if (node.round <= rounds_) start_round(v, node.round);
  }

  const P& prog_;
  const Graph& g_;
  Synchronizer sync_;
  const DelaySchedule& schedule_;
  std::optional<SyncTopology> topo_;
  SimOptions opts_;
  std::vector<LocalView> views_;
  std::vector<Node> nodes_;
  std::size_t rounds_;
  std::size_t budget_;
  std::uint64_t next_index_;
  double now_ = 0.0;
  std::priority_queue<Packet, std::vector<Packet>, Later> queue_;
  RunResult<State> result_;
};

}  // namespace detail

/// Runs a synchronous program on an asynchronous network under a synchronizer.
///
/// Every message (algorithm, acknowledgement, control) takes the delay the
/// schedule assigns to its global send index. Simultaneous deliveries are
/// processed in send order. Gamma requires the sparsified decomposition whose
/// support forest and inter-cluster F-edges carry the control traffic.
template <NodeProgram P>
RunResult<typename P::State> run_async(const P& prog, const Graph& g, Synchronizer sync, const DelaySchedule& schedule,
                                       const SparsifiedDecomposition* gamma_decomp = nullptr, SimOptions opts = {}) {
  std::optional<SyncTopology> topo;
  switch (sync) {
    case Synchronizer::alpha: break;
    case Synchronizer::beta: topo = bfs_forest_topology(g); break;
    case Synchronizer::gamma:
      if (gamma_decomp == nullptr) throw std::invalid_argument("run_async: synchronizer gamma needs a decomposition");
      topo = gamma_topology(g, *gamma_decomp);
      break;
  }
  return detail::AsyncEngine<P>(prog, g, sync, schedule, std::move(topo), opts).run();
}

}  // namespace capclust::congest
