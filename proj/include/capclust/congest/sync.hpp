#pragma once

#include <string>
#include <vector>

#include "capclust/congest/network.hpp"
#include "capclust/graph.hpp"

namespace capclust::congest {

/// Lock-step reference executor: all round-t messages are delivered before any
/// node processes round t. Simulated time advances by one per round.
template <NodeProgram P>
RunResult<typename P::State> run_sync(const P& prog, const Graph& g, std::size_t max_rounds, SimOptions opts = {}) {
  using Message = typename P::Message;
  const std::size_t rounds = prog.rounds(g);
  if (rounds > max_rounds) {
    throw RoundBudgetExceeded("program needs " + std::to_string(rounds) + " rounds, budget is " +
                              std::to_string(max_rounds));
  }
  const std::size_t n = g.num_vertices();
  const std::size_t budget = prog.bit_budget(g);
  const auto views = local_views(g);

  RunResult<typename P::State> result;
  result.states.reserve(n);
  for (VertexId v = 0; v < n; ++v) result.states.push_back(prog.init(views[v]));
  auto& tr = result.transcript;
  tr.recorded = opts.record_events;

  std::vector<std::vector<Envelope<Message>>> inbox(n);
  for (std::size_t t = 1; t <= rounds; ++t) {
    for (auto& box : inbox) box.clear();
    // Senders are visited in id order, so every inbox is already sorted by sender.
    for (VertexId v = 0; v < n; ++v) {
      Outbox<Message> out(views[v]);
      prog.send(result.states[v], views[v], t, out);
      for (const auto& [to, msg] : out.messages()) {
        const std::size_t bits = prog.bits(msg);
        if (bits > budget) {
          throw BitBudgetExceeded("payload of " + std::to_string(bits) + " bits exceeds budget " +
                                  std::to_string(budget));
        }
        tr.counters.max_payload_bits = std::max(tr.counters.max_payload_bits, bits);
        ++tr.counters.alg_msgs;
        if (tr.recorded) {
          tr.events.push_back({static_cast<double>(t), to, v, EventKind::algorithm, t, prog.digest(msg)});
        }
        inbox[to].push_back({v, msg});
      }
    }
    for (VertexId v = 0; v < n; ++v) {
      prog.receive(result.states[v], views[v], t, std::span<const Envelope<Message>>(inbox[v]));
    }
    tr.counters.round_completion.push_back(static_cast<double>(t));
  }
  tr.counters.rounds = rounds;
  tr.counters.sim_time = static_cast<double>(rounds);
  return result;
}

}  // namespace capclust::congest
