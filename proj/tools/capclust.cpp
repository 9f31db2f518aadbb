// capclust: command-line front end for clustering, spanners, LDDs and the
// CONGEST simulator. Output goes to stdout; diagnostics to stderr.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 bad input, 105+ usage (CLI11).

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "capclust/capclust.hpp"

namespace {

using namespace capclust;
using capclust::json;

constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;

struct GraphSource {
  std::string input;
  std::string gen;
};

struct Common {
  GraphSource source;
  std::uint64_t seed = 0;
  std::string format = "json";
};

class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Common& c, std::vector<std::string> formats = {"json", "csv", "edge-list"}) {
  auto* in = cmd->add_option("--input,-i", c.source.input, "Edge-list file");
  auto* gen = cmd->add_option("--gen,-g", c.source.gen, "Generator spec, e.g. er:100:0.1, grid:8:8:3, path:5");
  in->excludes(gen);
  gen->excludes(in);
  cmd->add_option("--seed,-s", c.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_option("--format,-f", c.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
}

Graph load_graph(const Common& c) {
  if (c.source.input.empty() == c.source.gen.empty()) {
    throw CLI::ValidationError("exactly one of --input or --gen is required");
  }
  if (!c.source.gen.empty()) return generate(c.source.gen, c.seed);
  std::ifstream in(c.source.input);
  if (!in) throw std::runtime_error("cannot open " + c.source.input);
  return load_edge_list(in);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_csv_clustering(const Clustering& c) {
  std::cout << "vertex,center,level,parent\n";
  for (VertexId v = 0; v < c.size(); ++v) {
    std::cout << v << ',' << c.center[v] << ',' << c.level[v] << ',';
    if (c.parent[v] != kNoVertex) std::cout << c.parent[v];
    std::cout << '\n';
  }
}

void emit_clustering(const Graph& g, const Clustering& c, const std::string& format, json extra) {
  if (format == "csv") {
    write_csv_clustering(c);
  } else if (format == "edge-list") {
    write_edge_list(std::cout, g.num_vertices(), c.support_forest(g));
  } else {
    json j = to_json(c);
    for (auto& [key, value] : extra.items()) j[key] = value;
    print(j);
  }
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  Common common;
  std::optional<std::int64_t> k;
  std::optional<double> beta;
  std::optional<double> p;
  std::optional<std::int64_t> r;
  bool dump_offsets = false;
};

int run_cluster(const ClusterArgs& a) {
  const int modes = (a.k ? 1 : 0) + (a.beta ? 1 : 0) + ((a.p || a.r) ? 1 : 0);
  if (modes != 1) throw CLI::ValidationError("exactly one of --k, --beta or --p/--r is required");
  if ((a.p || a.r) && !(a.p && a.r)) throw CLI::ValidationError("--p and --r go together");
  const Graph g = load_graph(a.common);
  const std::size_t n = g.num_vertices();

  double p = 0.0;
  std::int64_t r = 0;
  if (a.k) {
    std::tie(p, r) = spanner_params(n, *a.k);
  } else if (a.beta) {
    const auto lp = ldd_params(*a.beta, n);
    p = lp.p;
    r = lp.r;
  } else {
    p = *a.p;
    r = *a.r;
  }

  Offsets offsets;
  Clustering c;
  if (n <= 1 && !(p > 0.0 && p < 1.0)) {
    // A lone vertex: p = 1 - n^(-1/k) degenerates to 0; the offset is 0.
    offsets.delta.assign(n, 0);
    c = cluster_with_offsets(g, r, offsets);
    c.params = {p, r, a.common.seed};
  } else {
    offsets = sample_offsets(GeomCapParams(p, r), n, a.common.seed);
    c = cluster(g, p, r, a.common.seed);
  }
  json extra = json::object();
  if (a.dump_offsets) extra["offsets"] = to_json(offsets);
  emit_clustering(g, c, a.common.format, extra);
  return 0;
}

// ---------------------------------------------------------------- spanner

struct SpannerArgs {
  Common common;
  std::int64_t k = 2;
  bool check_stretch = false;
  bool check_coverage = false;
};

int run_spanner(const SpannerArgs& a) {
  const Graph g = load_graph(a.common);
  const auto sp = build_spanner(g, a.k, a.common.seed);
  const auto& d = sp.decomposition;
  int status = 0;
  json j = {{"k", a.k},
            {"n", g.num_vertices()},
            {"m", g.num_edges()},
            {"num_clusters", d.clustering.num_clusters()},
            {"size_F", d.F.size()},
            {"size_H", sp.H.size()}};
  if (a.check_stretch) {
    const double bound = static_cast<double>(2 * a.k - 1);
    const auto rep = verify_stretch(g, sp.H, bound);
    j["max_stretch"] = std::isinf(rep.max_stretch) ? json("inf") : json(rep.max_stretch);
    j["stretch_ok"] = rep.ok();
    if (!rep.ok()) {
      std::cerr << "stretch violated on edge (" << rep.violation->u << ", " << rep.violation->v << ")\n";
      status = kCheckFailed;
    }
  }
  if (a.check_coverage) {
    const auto cov = verify_coverage(g, d);
    j["coverage_ok"] = cov.ok();
    if (!cov.ok()) {
      std::cerr << "coverage violated on edge (" << cov.uncovered->u << ", " << cov.uncovered->v << ")\n";
      status = kCheckFailed;
    }
  }
  if (a.common.format == "edge-list") {
    write_edge_list(std::cout, g.num_vertices(), sp.H);
  } else if (a.common.format == "csv") {
    std::cout << "u,v,w,in_F\n";
    for (const auto& e : sp.H) {
      std::cout << e.u << ',' << e.v << ',' << e.w << ','
                << (std::binary_search(d.F.begin(), d.F.end(), e) ? 1 : 0) << '\n';
    }
  } else {
    print(j);
  }
  return status;
}

// ---------------------------------------------------------------- ldd

struct LddArgs {
  Common common;
  double beta = 0.5;
};

int run_ldd(const LddArgs& a) {
  const Graph g = load_graph(a.common);
  const auto params = ldd_params(a.beta, g.num_vertices());
  const auto c = ldd(g, a.beta, a.common.seed);
  const auto diam = strong_diameter(g, c);
  const auto support = verify_tree_support(g, c);
  std::size_t cut = 0;
  for (const auto& e : g.edges()) cut += c.center[e.u] != c.center[e.v] ? 1 : 0;

  int status = 0;
  if (diam.disconnected) {
    std::cerr << "cluster " << *diam.disconnected << " is not connected\n";
    status = kCheckFailed;
  } else if (diam.max > 2 * params.r) {
    std::cerr << "strong diameter " << diam.max << " exceeds 2r = " << 2 * params.r << '\n';
    status = kCheckFailed;
  }
  if (!support) {
    std::cerr << "tree support violated at vertex " << support.violation->vertex << ": "
              << support.violation->invariant << '\n';
    status = kCheckFailed;
  }
  emit_clustering(g, c, a.common.format,
                  {{"beta", a.beta},
                   {"strong_diameter", to_json(diam)},
                   {"diameter_bound", 2 * params.r},
                   {"cut_edges", cut}});
  return status;
}

// ---------------------------------------------------------------- cutprob

struct CutprobArgs {
  Common common;
  double beta = 0.5;
  std::size_t trials = 1000;
  unsigned threads = 0;
};

int run_cutprob(const CutprobArgs& a) {
  const Graph g = load_graph(a.common);
  const unsigned threads = a.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.threads;
  const auto stats = estimate_cut_prob(g, a.beta, a.trials, a.common.seed, threads);
  bool all_pass = true;
  for (std::size_t i = 0; i < stats.edges.size(); ++i) all_pass = all_pass && stats.passes(i);

  auto status_of = [&](std::size_t i) { return stats.vacuous(i) ? "vacuous" : stats.passes(i) ? "pass" : "fail"; };
  if (a.common.format == "json") {
    json edges = json::array();
    for (std::size_t i = 0; i < stats.edges.size(); ++i) {
      const auto& e = stats.edges[i];
      edges.push_back({{"u", e.u},
                       {"v", e.v},
                       {"w", e.w},
                       {"frequency", stats.frequency(i)},
                       {"bound", stats.bound(i)},
                       {"margin", stats.margin(i)},
                       {"status", status_of(i)}});
    }
    print({{"beta", a.beta},
           {"trials", stats.trials},
           {"sum_frequency", stats.sum_frequency()},
           {"beta_total_weight", stats.beta_total_weight()},
           {"edges", std::move(edges)}});
  } else {
    std::cout << "u,v,w,frequency,bound,margin,status\n";
    for (std::size_t i = 0; i < stats.edges.size(); ++i) {
      const auto& e = stats.edges[i];
      std::cout << e.u << ',' << e.v << ',' << e.w << ',' << stats.frequency(i) << ',' << stats.bound(i) << ','
                << stats.margin(i) << ',' << status_of(i) << '\n';
    }
  }
  if (!all_pass) {
    std::cerr << "cut probability bound failed on at least one edge\n";
    return kCheckFailed;
  }
  return 0;
}

// ---------------------------------------------------------------- sync

struct SyncArgs {
  Common common;
  std::string program = "bfs";
  std::string sync = "alpha";
  std::int64_t k = 2;
  VertexId source = 0;
  std::string schedule_file;
  std::optional<std::uint64_t> delay_seed;
  std::string transcript_file;
};

template <congest::NodeProgram P>
int simulate(const P& prog, const Graph& g, const SyncArgs& a, const congest::DelaySchedule& schedule) {
  using namespace capclust::congest;
  const auto sync = parse_synchronizer(a.sync);
  json j = {{"program", a.program}, {"synchronizer", to_string(sync)}, {"n", g.num_vertices()}, {"m", g.num_edges()}};

  std::optional<GammaInit> init;
  SimOptions opts;
  if (sync == Synchronizer::gamma) {
    init = gamma_init(g, a.k, a.common.seed, schedule);
    opts.first_msg_index = init->total.total_msgs();
    j["init"] = to_json(init->total);
    j["size_F"] = init->decomposition.F.size();
  }
  const auto reference = run_sync(prog, g, prog.rounds(g), {.record_events = false});
  const auto result = run_async(prog, g, sync, schedule, init ? &init->decomposition : nullptr, opts);
  const bool equal = result.states == reference.states;
  j["counters"] = to_json(result.transcript.counters);
  j["sync_reference"] = to_json(reference.transcript.counters);
  j["equivalent"] = equal;
  if (!a.transcript_file.empty()) {
    std::ofstream out(a.transcript_file);
    if (!out) throw std::runtime_error("cannot write " + a.transcript_file);
    result.transcript.write_jsonl(out);
  }
  print(j);
  if (!equal) {
    std::cerr << "asynchronous final states differ from the synchronous run\n";
    return kCheckFailed;
  }
  return 0;
}

int run_sync_cmd(const SyncArgs& a) {
  using namespace capclust::congest;
  const Graph g = load_graph(a.common);
  DelaySchedule schedule = DelaySchedule::uniform(a.delay_seed.value_or(derive_seed(a.common.seed, "delays")));
  if (!a.schedule_file.empty()) {
    std::ifstream in(a.schedule_file);
    if (!in) throw std::runtime_error("cannot open " + a.schedule_file);
    schedule = DelaySchedule::parse(in);
  }
  if (a.program == "bfs") {
    if (g.num_vertices() > 0 && a.source >= g.num_vertices()) throw CLI::ValidationError("--source out of range");
    return simulate(FloodBfs{a.source}, g, a, schedule);
  }
  if (a.program == "leader") return simulate(LeaderElection{}, g, a, schedule);
  const auto [p, r] = spanner_params(g.num_vertices(), a.k);
  return simulate(distributed_cluster_program(g, p, r, a.common.seed), g, a, schedule);
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::size_t instances = 50;
  std::size_t max_n = 60;
};

int run_verify(const VerifyArgs& a) {
  SplitMix64 rng(derive_seed(a.common.seed, "verify"));
  std::size_t checked = 0;
  auto fail = [&](const std::string& what, std::size_t instance) {
    throw CheckFailure(what + " (instance " + std::to_string(instance) + ")");
  };
  json summary = json::object();
  for (std::size_t i = 0; i < a.instances; ++i) {
    const std::size_t n = 1 + rng.below(a.max_n);
    const double density = 0.02 + 0.3 * rng.unit();
    const bool weighted = rng.below(2) == 1;
    const Graph g = gen_random(n, density, weighted ? 1 + static_cast<Weight>(rng.below(5)) : 1, rng());
    const std::int64_t r = static_cast<std::int64_t>(rng.below(8));
    const double p = 0.05 + 0.9 * rng.unit();
    const auto delta = sample_offsets(GeomCapParams(p, r), n, rng());

    const auto c = cluster_with_offsets(g, r, delta);
    const auto oracle = oracle_cluster_fractional(g, r, delta);
    if (c.center != oracle.center || c.level != oracle.level) fail("oracle equivalence", i);
    if (!verify_tree_support(g, c)) fail("tree support", i);
    const auto diam = strong_diameter(g, c);
    if (diam.disconnected || diam.max > 2 * r) fail("strong diameter", i);
    const auto dist = apsp(g);
    if (!check_level_optimality(g, r, delta, c, dist)) fail("level optimality", i);

    if (!weighted && n > 1) {
      const std::int64_t k = 2 + static_cast<std::int64_t>(rng.below(4));
      const auto [sp_p, sp_r] = spanner_params(n, k);
      const auto sp_delta = sample_offsets(GeomCapParams(sp_p, sp_r), n, rng());
      SparsifiedDecomposition d{cluster_with_offsets(g, sp_r, sp_delta), {}, k};
      d.F = sparsify(g, d.clustering);
      for (VertexId x = 0; x < n; ++x) {
        const auto allowed = brute_force_Cx(g, sp_r, sp_delta, d.clustering, x, dist);
        for (VertexId y : sparsify_vertex(g, d.clustering, x)) {
          if (!std::binary_search(allowed.begin(), allowed.end(), y)) fail("sparsifier fidelity", i);
        }
      }
      if (!verify_coverage(g, d)) fail("coverage", i);
      if (!verify_stretch(g, spanner_edges(g, d), static_cast<double>(2 * k - 1)).ok()) fail("stretch", i);
    }
    ++checked;
  }
  summary["instances"] = checked;
  summary["checks"] = {"oracle equivalence", "tree support", "strong diameter", "level optimality",
                       "sparsifier fidelity", "coverage", "stretch"};
  summary["ok"] = true;
  print(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capped-geometric ball-growing clustering, spanners, LDDs and CONGEST simulation"};
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a graph and print the clustering");
  add_common(cluster_cmd, cluster_args.common);
  cluster_cmd->add_option("--k", cluster_args.k, "Spanner parameters p = 1 - n^(-1/k), r = k - 1");
  cluster_cmd->add_option("--beta", cluster_args.beta, "LDD parameters for rate beta");
  cluster_cmd->add_option("--p", cluster_args.p, "Explicit geometric parameter");
  cluster_cmd->add_option("--r", cluster_args.r, "Explicit cap");
  cluster_cmd->add_flag("--dump-offsets", cluster_args.dump_offsets, "Include the sampled offsets");

  SpannerArgs spanner_args;
  auto* spanner_cmd = app.add_subcommand("spanner", "Build a (2k-1)-spanner");
  add_common(spanner_cmd, spanner_args.common);
  spanner_cmd->add_option("--k", spanner_args.k, "Stretch parameter")->required()->check(CLI::Range(2, 64));
  spanner_cmd->add_flag("--check-stretch", spanner_args.check_stretch, "Verify per-edge stretch <= 2k-1");
  spanner_cmd->add_flag("--check-coverage", spanner_args.check_coverage, "Verify every edge is covered by F");

  LddArgs ldd_args;
  auto* ldd_cmd = app.add_subcommand("ldd", "Low-diameter decomposition with strong-diameter check");
  add_common(ldd_cmd, ldd_args.common);
  ldd_cmd->add_option("--beta", ldd_args.beta, "Cut rate")->required()->check(CLI::Range(0.0, 1.0));

  CutprobArgs cut_args;
  auto* cut_cmd = app.add_subcommand("cutprob", "Estimate per-edge cut probabilities of the LDD");
  add_common(cut_cmd, cut_args.common, {"json", "csv"});
  cut_args.common.format = "csv";
  cut_cmd->add_option("--beta", cut_args.beta, "Cut rate")->required()->check(CLI::Range(0.0, 1.0));
  cut_cmd->add_option("--trials", cut_args.trials, "Number of LDD runs")->capture_default_str()->check(
      CLI::PositiveNumber);
  cut_cmd->add_option("--threads", cut_args.threads, "Worker threads (0: hardware concurrency)");

  SyncArgs sync_args;
  auto* sync_cmd = app.add_subcommand("sync", "Run a demo program under a synchronizer");
  add_common(sync_cmd, sync_args.common, {"json"});
  sync_cmd->add_option("--program", sync_args.program)->check(CLI::IsMember({"bfs", "leader", "cluster"}))
      ->capture_default_str();
  sync_cmd->add_option("--sync", sync_args.sync)->check(CLI::IsMember({"alpha", "beta", "gamma"}))
      ->capture_default_str();
  sync_cmd->add_option("--k", sync_args.k, "Decomposition parameter for gamma and the clustering program")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  sync_cmd->add_option("--source", sync_args.source, "BFS source")->capture_default_str();
  auto* sched = sync_cmd->add_option("--schedule", sync_args.schedule_file, "Delay file: lines 'msg_index delay'");
  sync_cmd->add_option("--delay-seed", sync_args.delay_seed, "Seed of uniform (0, 1] delays")->excludes(sched);
  sync_cmd->add_option("--transcript", sync_args.transcript_file, "Write the event log as JSON lines");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Run oracle and invariant checks on generated instances");
  verify_cmd->add_option("--seed,-s", verify_args.common.seed)->capture_default_str();
  verify_cmd->add_option("--format,-f", verify_args.common.format)->check(CLI::IsMember({"json"}));
  verify_cmd->add_option("--instances", verify_args.instances)->capture_default_str();
  verify_cmd->add_option("--max-n", verify_args.max_n)->check(CLI::Range(1, 200))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster_cmd->parsed()) return run_cluster(cluster_args);
    if (spanner_cmd->parsed()) return run_spanner(spanner_args);
    if (ldd_cmd->parsed()) return run_ldd(ldd_args);
    if (cut_cmd->parsed()) return run_cutprob(cut_args);
    if (sync_cmd->parsed()) return run_sync_cmd(sync_args);
    if (verify_cmd->parsed()) return run_verify(verify_args);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return 0;
}
