#pragma once

#include <nlohmann/json.hpp>

#include "capclust/clustering.hpp"
#include "capclust/congest/network.hpp"
#include "capclust/distribution.hpp"
#include "capclust/graph.hpp"
#include "capclust/ldd.hpp"
#include "capclust/spanner.hpp"

namespace capclust {

using nlohmann::json;

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.w});
  return {{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.size() > 2 ? e.at(2).get<Weight>() : 1});
  }
  return Graph(j.at("n").get<std::size_t>(), std::move(edges));
}

inline json to_json(const Clustering& c) {
  json parent = json::array();
  for (VertexId p : c.parent) parent.push_back(p == kNoVertex ? json(nullptr) : json(p));
  return {{"params", {{"p", c.params.p}, {"r", c.params.r}, {"seed", c.params.seed}}},
          {"num_clusters", c.num_clusters()},
          {"center", c.center},
          {"level", c.level},
          {"parent", std::move(parent)}};
}

inline json to_json(const Offsets& o) { return json(o.delta); }

inline json edges_to_json(std::span<const Edge> edges) {
  json out = json::array();
  for (const auto& e : edges) out.push_back({e.u, e.v, e.w});
  return out;
}

inline json to_json(const congest::Counters& c) {
  return {{"alg_msgs", c.alg_msgs},
          {"sync_msgs", c.sync_msgs},
          {"ack_msgs", c.ack_msgs},
          {"sim_time", c.sim_time},
          {"rounds", c.rounds},
          {"max_payload_bits", c.max_payload_bits}};
}

inline json to_json(const StrongDiameter& d) {
  json out = {{"max", d.max}};
  if (d.disconnected) out["disconnected_cluster"] = *d.disconnected;
  return out;
}

}  // namespace capclust
