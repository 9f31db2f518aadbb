#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "capclust/congest/async.hpp"
#include "capclust/congest/network.hpp"
#include "capclust/congest/programs.hpp"
#include "capclust/spanner.hpp"

namespace capclust::congest {

struct GammaInit {
  SparsifiedDecomposition decomposition;
  Counters clustering;  // distributed clustering under alpha
  Counters announce;    // tree and F-edge announcement under alpha
  Counters total;
};

/// Builds the decomposition gamma runs on, inside the simulator.
///
/// The clustering program runs under synchronizer alpha; each node then derives
/// its support-forest parent and its F-edges from what it learned about its
/// neighbors, and one more alpha round tells parents about children and the
/// far endpoint of every F-edge. Both phases draw delays from one schedule.
inline GammaInit gamma_init(const Graph& g, std::int64_t k, std::uint64_t seed, const DelaySchedule& schedule,
                            SimOptions opts = {}) {
  if (!g.unweighted()) throw std::invalid_argument("gamma_init: graph must be unweighted");
  const auto [p, r] = spanner_params(g.num_vertices(), k);
  const auto prog = distributed_cluster_program(g, p, r, seed);

  GammaInit out;
  auto phase1 = run_async(prog, g, Synchronizer::alpha, schedule, nullptr, opts);
  out.clustering = phase1.transcript.counters;

  SimOptions next = opts;
  next.first_msg_index = opts.first_msg_index + out.clustering.total_msgs();
  const AnnounceForest announce{phase1.states};
  auto phase2 = run_async(announce, g, Synchronizer::alpha, schedule, nullptr, next);
  out.announce = phase2.transcript.counters;
  out.total = out.clustering;
  out.total += out.announce;

  auto& d = out.decomposition;
  d.clustering = reassemble_clustering(g, phase1.states, prog);
  d.k = k;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (VertexId y : phase2.states[v].f_neighbors) {
      if (v < y) d.F.push_back({v, y, 1});
    }
  }
  return out;
}

}  // namespace capclust::congest
