#include <gtest/gtest.h>

#include <sstream>

#include "capclust/congest/async.hpp"
#include "capclust/congest/gamma.hpp"
#include "capclust/congest/programs.hpp"
#include "capclust/congest/sync.hpp"
#include "capclust/generators.hpp"
#include "capclust/ldd.hpp"

namespace capclust::congest {
namespace {

std::vector<Dist> bfs_distances(const RunResult<FloodBfs::State>& res) {
  std::vector<Dist> out;
  for (const auto& s : res.states) out.push_back(s.dist);
  return out;
}

// Sends a payload one bit over budget.
struct Oversized {
  using Message = std::uint64_t;
  struct State {
    friend bool operator==(const State&, const State&) = default;
  };
  std::size_t rounds(const Graph&) const { return 1; }
  std::size_t bit_budget(const Graph&) const { return 3; }
  State init(const LocalView&) const { return {}; }
  void send(const State&, const LocalView&, std::size_t, Outbox<Message>& out) const { out.broadcast(15); }
  void receive(State&, const LocalView&, std::size_t, std::span<const Envelope<Message>>) const {}
  std::size_t bits(const Message& m) const { return bits_for(m); }
  std::uint64_t digest(const Message& m) const { return m; }
};

// Talks forever; only the watchdog stops it.
struct Chatter {
  using Message = std::uint64_t;
  struct State {
    friend bool operator==(const State&, const State&) = default;
  };
  std::size_t rounds(const Graph&) const { return 1'000'000; }
  std::size_t bit_budget(const Graph&) const { return 1; }
  State init(const LocalView&) const { return {}; }
  void send(const State&, const LocalView&, std::size_t, Outbox<Message>& out) const { out.broadcast(0); }
  void receive(State&, const LocalView&, std::size_t, std::span<const Envelope<Message>>) const {}
  std::size_t bits(const Message&) const { return 1; }
  std::uint64_t digest(const Message& m) const { return m; }
};

// Records the exact inbox of every round, to check delivery order and content.
struct InboxLog {
  using Message = std::uint64_t;
  struct State {
    std::vector<std::vector<std::pair<VertexId, std::uint64_t>>> rounds;
    friend bool operator==(const State&, const State&) = default;
  };
  std::size_t rounds(const Graph&) const { return 4; }
  std::size_t bit_budget(const Graph&) const { return 64; }
  State init(const LocalView&) const { return {}; }
  void send(const State&, const LocalView& view, std::size_t round, Outbox<Message>& out) const {
    for (const auto& nb : view.neighbors) {
      if ((view.self + nb.id + round) % 3 != 0) out.send(nb.id, view.self * 100 + round);
    }
  }
  void receive(State& s, const LocalView&, std::size_t, std::span<const Envelope<Message>> inbox) const {
    auto& log = s.rounds.emplace_back();
    for (const auto& env : inbox) log.push_back({env.from, env.msg});
  }
  std::size_t bits(const Message& m) const { return bits_for(m); }
  std::uint64_t digest(const Message& m) const { return m; }
};

TEST(RunSync, BfsOnPath) {
  const Graph g = gen_path(5);
  const auto res = run_sync(FloodBfs{0}, g, 10);
  EXPECT_EQ(bfs_distances(res), (std::vector<Dist>{0, 1, 2, 3, 4}));
  EXPECT_EQ(res.transcript.counters.rounds, 5u);
  EXPECT_EQ(res.transcript.counters.alg_msgs, 1u + 2 + 2 + 2 + 1);
  EXPECT_TRUE(res.transcript.consistent());
}

TEST(RunSync, EmptyGraphSendsNothing) {
  const Graph g(6);
  const auto res = run_sync(LeaderElection{}, g, 10);
  EXPECT_EQ(res.transcript.counters.alg_msgs, 0u);
  EXPECT_TRUE(res.transcript.events.empty());
  for (VertexId v = 0; v < 6; ++v) EXPECT_EQ(res.states[v].leader, v);
}

TEST(RunSync, RoundBudget) {
  EXPECT_THROW(run_sync(FloodBfs{0}, gen_path(5), 4), RoundBudgetExceeded);
}

TEST(RunSync, BitBudget) {
  EXPECT_THROW(run_sync(Oversized{}, gen_path(2), 5), BitBudgetExceeded);
  EXPECT_THROW(run_async(Oversized{}, gen_path(2), Synchronizer::alpha, DelaySchedule::constant(1.0)),
               BitBudgetExceeded);
}

TEST(Outbox, EnforcesNeighborsAndOneMessagePerEdge) {
  const Graph g = gen_path(3);
  const auto views = local_views(g);
  Outbox<int> out(views[0]);
  EXPECT_THROW(out.send(2, 1), SimulatorError);
  out.send(1, 1);
  EXPECT_THROW(out.send(1, 2), SimulatorError);
}

TEST(LeaderElection, LearnsComponentMaximum) {
  const Graph g = parse_edge_list("6 3\n4 1\n1 5\n2 3");
  const auto res = run_sync(LeaderElection{}, g, 10);
  std::vector<VertexId> leaders;
  for (const auto& s : res.states) leaders.push_back(s.leader);
  EXPECT_EQ(leaders, (std::vector<VertexId>{0, 5, 3, 3, 5, 5}));
}

TEST(DelaySchedule, ParseAndExhaustion) {
  std::istringstream in("# index delay\n0 0.5\n2 1\n\n1 0.25\n");
  const auto s = DelaySchedule::parse(in);
  EXPECT_EQ(s.delay(0), 0.5);
  EXPECT_EQ(s.delay(1), 0.25);
  EXPECT_EQ(s.delay(2), 1.0);
  EXPECT_THROW(s.delay(3), ScheduleExhausted);

  std::istringstream gap("0 0.5\n2 0.5\n");
  EXPECT_THROW(DelaySchedule::parse(gap).delay(1), ScheduleExhausted);
  std::istringstream bad("0 1.5\n");
  EXPECT_THROW(DelaySchedule::parse(bad), std::invalid_argument);
  std::istringstream zero("0 0\n");
  EXPECT_THROW(DelaySchedule::parse(zero), std::invalid_argument);
  std::istringstream junk("0 0.5 7\n");
  EXPECT_THROW(DelaySchedule::parse(junk), std::invalid_argument);
  EXPECT_THROW(DelaySchedule::constant(0.0), std::invalid_argument);
}

TEST(DelaySchedule, UniformInUnitInterval) {
  const auto s = DelaySchedule::uniform(4);
  for (std::uint64_t i = 0; i < 10'000; ++i) {
    const double d = s.delay(i);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
}

TEST(RunAsync, ScheduleExhaustedIsReported) {
  const auto s = DelaySchedule::explicit_delays({0.5, 0.5, 0.5});
  EXPECT_THROW(run_async(FloodBfs{0}, gen_path(5), Synchronizer::alpha, s), ScheduleExhausted);
}

TEST(RunAsync, WatchdogStopsRunaway) {
  SimOptions opts;
  opts.event_cap = 10'000;
  EXPECT_THROW(run_async(Chatter{}, gen_cycle(5), Synchronizer::alpha, DelaySchedule::uniform(1), nullptr, opts),
               EventCapExceeded);
}

TEST(RunAsync, GammaNeedsDecomposition) {
  EXPECT_THROW(run_async(FloodBfs{0}, gen_path(3), Synchronizer::gamma, DelaySchedule::uniform(1)),
               std::invalid_argument);
}

TEST(RunAsync, InboxesMatchSynchronousRun) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = gen_random(15, 0.3, 1, rng());
    const auto decomp = build_spanner(g, 3, rng()).decomposition;
    const auto ref = run_sync(InboxLog{}, g, 4);
    for (auto sync : {Synchronizer::alpha, Synchronizer::beta, Synchronizer::gamma}) {
      const auto res = run_async(InboxLog{}, g, sync, DelaySchedule::uniform(rng()), &decomp);
      ASSERT_EQ(res.states, ref.states) << to_string(sync);
      EXPECT_EQ(res.transcript.counters.alg_msgs, ref.transcript.counters.alg_msgs);
      EXPECT_EQ(res.transcript.counters.ack_msgs, ref.transcript.counters.alg_msgs);
    }
  }
}

TEST(RunAsync, EquivalentUnderAllSynchronizers) {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = gen_random(2 + rng.below(30), 0.05 + 0.2 * rng.unit(), 1, rng());
    const auto decomp = build_spanner(g, 2 + static_cast<std::int64_t>(rng.below(3)), rng()).decomposition;
    const VertexId src = static_cast<VertexId>(rng.below(g.num_vertices()));
    const auto bfs_ref = run_sync(FloodBfs{src}, g, g.num_vertices());
    const auto leader_ref = run_sync(LeaderElection{}, g, g.num_vertices());
    for (auto sync : {Synchronizer::alpha, Synchronizer::beta, Synchronizer::gamma}) {
      const auto schedule = DelaySchedule::uniform(rng());
      const auto bfs = run_async(FloodBfs{src}, g, sync, schedule, &decomp);
      ASSERT_EQ(bfs.states, bfs_ref.states);
      ASSERT_TRUE(bfs.transcript.consistent());
      const auto leader = run_async(LeaderElection{}, g, sync, schedule, &decomp);
      ASSERT_EQ(leader.states, leader_ref.states);
      ASSERT_TRUE(leader.transcript.consistent());
    }
  }
}

TEST(RunAsync, DeterministicTranscripts) {
  const Graph g = gen_random(25, 0.2, 1, 4);
  const auto decomp = build_spanner(g, 3, 1).decomposition;
  for (auto sync : {Synchronizer::alpha, Synchronizer::beta, Synchronizer::gamma}) {
    std::ostringstream a, b;
    run_async(LeaderElection{}, g, sync, DelaySchedule::uniform(3), &decomp).transcript.write_jsonl(a);
    run_async(LeaderElection{}, g, sync, DelaySchedule::uniform(3), &decomp).transcript.write_jsonl(b);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_FALSE(a.str().empty());
  }
}

TEST(RunAsync, ConstantDelayAlphaTiming) {
  // With unit delays a round is message, ack, safe: three time units.
  const Graph g = gen_path(4);
  const auto res = run_async(FloodBfs{0}, g, Synchronizer::alpha, DelaySchedule::constant(1.0));
  EXPECT_EQ(res.transcript.counters.rounds, 4u);
  EXPECT_LE(res.transcript.counters.sim_time, 3.0 * 4);
  EXPECT_EQ(res.transcript.counters.sync_msgs, 4u * 2 * g.num_edges());
}

TEST(RunAsync, BetaOnStar) {
  const std::size_t n = 40;
  const Graph g = gen_star(n);
  const auto topo = bfs_forest_topology(g);
  EXPECT_EQ(topo.height, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto res = run_async(LeaderElection{}, g, Synchronizer::beta, DelaySchedule::uniform(seed));
    const auto& c = res.transcript.counters;
    // safe_up and go on each of the n - 1 tree edges, every round.
    EXPECT_EQ(c.sync_msgs, c.rounds * 2 * (n - 1));
    double prev = 0.0;
    for (double t : c.round_completion) {
      // message + ack + safe_up + go, each at most one unit.
      EXPECT_LE(t - prev, 2.0 + 2.0 * static_cast<double>(topo.height) + 1e-9);
      prev = t;
    }
  }
}

TEST(Topology, BfsForestSpansComponents) {
  const Graph g = parse_edge_list("6 4\n0 1\n1 2\n3 4\n4 5");
  const auto topo = bfs_forest_topology(g);
  EXPECT_EQ(topo.parent, (std::vector<VertexId>{kNoVertex, 0, 1, kNoVertex, 3, 4}));
  EXPECT_EQ(topo.height, 2);
  EXPECT_EQ(topo.num_tree_edges(), 4u);
}

TEST(Topology, GammaLinksAreInterClusterFEdges) {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = gen_random(40, 0.15, 1, rng());
    const auto d = build_spanner(g, 3, rng()).decomposition;
    const auto topo = gamma_topology(g, d);
    std::size_t inter = 0;
    for (const auto& e : d.F) inter += d.clustering.center[e.u] != d.clustering.center[e.v] ? 1 : 0;
    EXPECT_EQ(topo.num_links(), inter);
    EXPECT_LE(topo.height, 2);  // r = k - 1 hops in an unweighted graph
  }
}

TEST(DistributedClustering, SingleVertex) {
  const Graph g(1);
  const auto prog = distributed_cluster_program(g, 0.5, 3, 9);
  const auto res = run_sync(prog, g, 100);
  EXPECT_EQ(res.transcript.counters.rounds, 1u);
  EXPECT_EQ(res.transcript.counters.alg_msgs, 0u);
  EXPECT_EQ(reassemble_clustering(g, res.states, prog), cluster(g, 0.5, 3, 9));
}

TEST(DistributedClustering, EqualsSequential) {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const bool weighted = trial % 2 == 1;
    const Graph g = gen_random(1 + rng.below(50), 0.03 + 0.2 * rng.unit(), weighted ? 4 : 1, rng());
    const double p = 0.05 + 0.9 * rng.unit();
    const std::int64_t r = static_cast<std::int64_t>(rng.below(trial % 10 == 0 ? 300 : 12));
    const std::uint64_t seed = rng();
    const auto prog = distributed_cluster_program(g, p, r, seed);
    const auto res = run_sync(prog, g, static_cast<std::size_t>(r) + 1);
    EXPECT_LE(res.transcript.counters.rounds, static_cast<std::size_t>(r) + 1);
    EXPECT_LE(res.transcript.counters.max_payload_bits, prog.bit_budget(g));
    ASSERT_EQ(reassemble_clustering(g, res.states, prog), cluster(g, p, r, seed)) << "trial " << trial;
    EXPECT_TRUE(neighbor_knowledge_consistent(g, res.states));
  }
}

TEST(DistributedClustering, LddParametersOnGrid) {
  const Graph g = gen_grid(6, 6, 3, 1);
  const auto params = ldd_params(0.3, g.num_vertices());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto prog = distributed_cluster_program(g, params.p, params.r, seed);
    const auto res = run_sync(prog, g, static_cast<std::size_t>(params.r) + 1);
    EXPECT_EQ(reassemble_clustering(g, res.states, prog), ldd(g, 0.3, seed));
  }
}

TEST(GammaInit, MatchesBuildSpanner) {
  SplitMix64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = gen_random(1 + rng.below(50), 0.05 + 0.2 * rng.unit(), 1, rng());
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng.below(4));
    const std::uint64_t seed = rng();
    const auto init = gamma_init(g, k, seed, DelaySchedule::uniform(rng()));
    ASSERT_EQ(init.decomposition, build_spanner(g, k, seed).decomposition) << "trial " << trial;
    const auto m = static_cast<double>(g.num_edges());
    EXPECT_LE(static_cast<double>(init.total.total_msgs()), 9.0 * static_cast<double>(k) * m);
    EXPECT_LE(init.total.sim_time, 3.0 * static_cast<double>(k + 1));
  }
}

TEST(GammaInit, SharedScheduleContinuesIndices) {
  const Graph g = gen_random(20, 0.2, 1, 3);
  const auto first = gamma_init(g, 2, 1, DelaySchedule::uniform(5));
  const auto total = first.total.total_msgs();
  std::vector<double> exact(total);
  for (std::size_t i = 0; i < total; ++i) exact[i] = DelaySchedule::uniform(5).delay(i);
  const auto replay = gamma_init(g, 2, 1, DelaySchedule::explicit_delays(exact));
  EXPECT_EQ(replay.decomposition, first.decomposition);
  exact.pop_back();
  EXPECT_THROW(gamma_init(g, 2, 1, DelaySchedule::explicit_delays(exact)), ScheduleExhausted);
}

TEST(Gamma, SyncMessagesWithinFourPerEdgePerRound) {
  SplitMix64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = gen_random(10 + rng.below(40), 0.1, 1, rng());
    const auto init = gamma_init(g, 3, rng(), DelaySchedule::uniform(rng()));
    const auto res = run_async(FloodBfs{0}, g, Synchronizer::gamma, DelaySchedule::uniform(rng()),
                               &init.decomposition);
    const auto& c = res.transcript.counters;
    EXPECT_LE(c.sync_msgs, 4 * c.rounds * (init.decomposition.F.size() + g.num_vertices()));
  }
}

TEST(Transcript, JsonLinesFormat) {
  const auto res = run_sync(FloodBfs{0}, gen_path(2), 2);
  std::ostringstream out;
  res.transcript.write_jsonl(out);
  // Node 1 improves in round 1 and forwards its distance back in round 2.
  EXPECT_EQ(out.str(),
            "{\"time\":1,\"node\":1,\"peer\":0,\"kind\":\"alg\",\"round\":1,\"digest\":0}\n"
            "{\"time\":2,\"node\":0,\"peer\":1,\"kind\":\"alg\",\"round\":2,\"digest\":1}\n");
}

TEST(Transcript, InconsistentCountersDetected) {
  auto res = run_sync(FloodBfs{0}, gen_path(3), 3);
  EXPECT_TRUE(res.transcript.consistent());
  ++res.transcript.counters.alg_msgs;
  EXPECT_FALSE(res.transcript.consistent());
}

}  // namespace
}  // namespace capclust::congest
