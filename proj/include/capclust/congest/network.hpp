#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "capclust/graph.hpp"
#include "capclust/hash.hpp"

namespace capclust::congest {

class SimulatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RoundBudgetExceeded : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

class ScheduleExhausted : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

class EventCapExceeded : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

class BitBudgetExceeded : public SimulatorError {
 public:
  using SimulatorError::SimulatorError;
};

/// Bits needed to write x in binary (at least one).
constexpr std::size_t bits_for(std::uint64_t x) noexcept {
  return x == 0 ? 1 : static_cast<std::size_t>(std::bit_width(x));
}

/// ceil(log2(x)) for x >= 1.
constexpr std::size_t ceil_log2(std::uint64_t x) noexcept {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

/// Everything a node knows about the network before the first round.
struct LocalView {
  VertexId self = 0;
  std::size_t n = 0;
  std::span<const Neighbor> neighbors;

  /// Position of `id` in the (sorted) neighbor list, or npos.
  std::size_t index_of(VertexId id) const {
    auto it = std::lower_bound(neighbors.begin(), neighbors.end(), id,
                               [](const Neighbor& a, VertexId x) { return a.id < x; });
    if (it == neighbors.end() || it->id != id) return npos;
    return static_cast<std::size_t>(it - neighbors.begin());
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

template <class Message>
struct Envelope {
  VertexId from = 0;
  Message msg{};
};

/// Messages a node emits in one round; at most one per incident edge.
template <class Message>
class Outbox {
 public:
  explicit Outbox(const LocalView& view) : view_(&view), used_(view.neighbors.size(), false) {}

  void send(VertexId to, Message msg) {
    const auto idx = view_->index_of(to);
    if (idx == LocalView::npos) {
      throw SimulatorError("node " + std::to_string(view_->self) + " sent to non-neighbor " + std::to_string(to));
    }
    if (used_[idx]) {
      throw SimulatorError("node " + std::to_string(view_->self) + " sent two messages to " + std::to_string(to) +
                           " in one round");
    }
    used_[idx] = true;
    out_.push_back({to, std::move(msg)});
  }

  void broadcast(const Message& msg) {
    for (const auto& nb : view_->neighbors) send(nb.id, msg);
  }

  std::span<const std::pair<VertexId, Message>> messages() const noexcept { return out_; }

 private:
  const LocalView* view_;
  std::vector<bool> used_;
  std::vector<std::pair<VertexId, Message>> out_;
};

/// A synchronous CONGEST algorithm, written once and run unchanged by the
/// lock-step executor and by every synchronizer.
///
/// Round t (1-based): every node calls send(state, view, t, out), the messages
/// are delivered, and every node calls receive(state, view, t, inbox) with the
/// round-t messages addressed to it, ordered by sender id. rounds(g) is the
/// common number of rounds; bit_budget(g) bounds bits(msg) for every payload.
template <class P>
concept NodeProgram =
    std::equality_comparable<typename P::State> &&
    requires(const P& prog, const Graph& g, const LocalView& view, typename P::State& state,
             const typename P::Message& msg, std::size_t round,
             std::span<const Envelope<typename P::Message>> inbox, Outbox<typename P::Message>& out) {
      { prog.rounds(g) } -> std::convertible_to<std::size_t>;
      { prog.bit_budget(g) } -> std::convertible_to<std::size_t>;
      { prog.init(view) } -> std::same_as<typename P::State>;
      prog.send(state, view, round, out);
      prog.receive(state, view, round, inbox);
      { prog.bits(msg) } -> std::convertible_to<std::size_t>;
      { prog.digest(msg) } -> std::convertible_to<std::uint64_t>;
    };

enum class EventKind {
  algorithm,
  ack,
  safe,           // alpha: sender is safe
  safe_up,        // subtree safe, towards the root
  go,             // beta: root releases the next round
  cluster_safe,   // gamma: down-cast from the cluster center
  safe_across,    // gamma: over a sparsified inter-cluster edge
  ready_up,       // gamma: subtree ready
  cluster_ready,  // gamma: down-cast, releases the next round
};

inline constexpr std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::algorithm: return "alg";
    case EventKind::ack: return "ack";
    case EventKind::safe: return "safe";
    case EventKind::safe_up: return "safe_up";
    case EventKind::go: return "go";
    case EventKind::cluster_safe: return "cluster_safe";
    case EventKind::safe_across: return "safe_across";
    case EventKind::ready_up: return "ready_up";
    case EventKind::cluster_ready: return "cluster_ready";
  }
  return "unknown";
}

inline constexpr bool is_sync_kind(EventKind kind) {
  return kind != EventKind::algorithm && kind != EventKind::ack;
}

/// One message delivery.
struct Event {
  double time = 0.0;
  VertexId node = 0;  // receiver
  VertexId peer = 0;  // sender
  EventKind kind = EventKind::algorithm;
  std::size_t round = 0;
  std::uint64_t digest = 0;
};

struct Counters {
  std::uint64_t alg_msgs = 0;
  /// Acknowledgements, one per algorithm message; part of the algorithm's own message bill.
  std::uint64_t ack_msgs = 0;
  /// Synchronizer control traffic (safe / ready notifications), excluding acks.
  std::uint64_t sync_msgs = 0;
  double sim_time = 0.0;
  std::size_t rounds = 0;
  std::size_t max_payload_bits = 0;
  /// Time at which the last node finished each simulated round.
  std::vector<double> round_completion;

  std::uint64_t total_msgs() const noexcept { return alg_msgs + ack_msgs + sync_msgs; }

  Counters& operator+=(const Counters& o) {
    alg_msgs += o.alg_msgs;
    ack_msgs += o.ack_msgs;
    sync_msgs += o.sync_msgs;
    sim_time += o.sim_time;
    rounds += o.rounds;
    max_payload_bits = std::max(max_payload_bits, o.max_payload_bits);
    return *this;
  }
};

/// Event-ordered record of one execution.
struct Transcript {
  std::vector<Event> events;
  Counters counters;
  bool recorded = true;

  /// Times are nondecreasing and every counter equals the count derived from the log.
  bool consistent() const {
    if (!recorded) return true;
    std::uint64_t alg = 0, ack = 0, sync = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i > 0 && events[i].time < events[i - 1].time) return false;
      switch (events[i].kind) {
        case EventKind::algorithm: ++alg; break;
        case EventKind::ack: ++ack; break;
        default: ++sync; break;
      }
    }
    return alg == counters.alg_msgs && ack == counters.ack_msgs && sync == counters.sync_msgs;
  }

  /// One JSON object per line.
  void write_jsonl(std::ostream& out) const {
    const auto precision = out.precision(17);
    for (const auto& e : events) {
      out << "{\"time\":" << e.time << ",\"node\":" << e.node << ",\"peer\":" << e.peer << ",\"kind\":\""
          << to_string(e.kind) << "\",\"round\":" << e.round << ",\"digest\":" << e.digest << "}\n";
    }
    out.precision(precision);
  }
};

template <class State>
struct RunResult {
  std::vector<State> states;
  Transcript transcript;
};

struct SimOptions {
  bool record_events = true;
  std::uint64_t event_cap = 100'000'000;
  /// Index given to the first message; lets consecutive phases share one delay schedule.
  std::uint64_t first_msg_index = 0;
};

/// Delay of every message, indexed by global send order. All delays lie in (0, 1].
class DelaySchedule {
 public:
  /// Delays drawn uniformly from (0, 1], a pure function of (seed, index).
  static DelaySchedule uniform(std::uint64_t seed) {
    DelaySchedule s;
    s.kind_ = Kind::uniform;
    s.seed_ = seed;
    return s;
  }

  static DelaySchedule constant(double delay) {
    check_delay(delay, 0);
    DelaySchedule s;
    s.kind_ = Kind::constant;
    s.constant_ = delay;
    return s;
  }

  /// delays[i] is the delay of message i; messages past the end exhaust the schedule.
  static DelaySchedule explicit_delays(std::vector<double> delays) {
    for (std::size_t i = 0; i < delays.size(); ++i) {
      if (!std::isnan(delays[i])) check_delay(delays[i], i);
    }
    DelaySchedule s;
    s.kind_ = Kind::table;
    s.table_ = std::move(delays);
    return s;
  }

  /// Lines "msg_index delay"; blank lines and '#' comments are skipped.
  static DelaySchedule parse(std::istream& in) {
    std::vector<double> table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream fields(line);
      std::uint64_t index = 0;
      double delay = 0.0;
      std::string rest;
      if (!(fields >> index >> delay) || (fields >> rest)) {
        throw std::invalid_argument("delay schedule line " + std::to_string(line_no) + ": expected \"msg_index delay\"");
      }
      if (!(delay > 0.0 && delay <= 1.0)) {
        throw std::invalid_argument("delay schedule line " + std::to_string(line_no) + ": delay must lie in (0, 1]");
      }
      if (index >= table.size()) table.resize(index + 1, std::numeric_limits<double>::quiet_NaN());
      table[index] = delay;
    }
    return explicit_delays(std::move(table));
  }

  double delay(std::uint64_t index) const {
    switch (kind_) {
      case Kind::uniform: return to_unit_open_closed(stream_at(seed_, index));
      case Kind::constant: return constant_;
      case Kind::table:
        if (index >= table_.size() || std::isnan(table_[index])) {
          throw ScheduleExhausted("delay schedule has no entry for message " + std::to_string(index));
        }
        return table_[index];
    }
    return 1.0;
  }

 private:
  enum class Kind { uniform, constant, table };

  static void check_delay(double d, std::size_t index) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw std::invalid_argument("delay of message " + std::to_string(index) + " must lie in (0, 1]");
    }
  }

  Kind kind_ = Kind::constant;
  std::uint64_t seed_ = 0;
  double constant_ = 1.0;
  std::vector<double> table_;
};

inline std::vector<LocalView> local_views(const Graph& g) {
  std::vector<LocalView> views(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) views[v] = {v, g.num_vertices(), g.neighbors(v)};
  return views;
}

}  // namespace capclust::congest
