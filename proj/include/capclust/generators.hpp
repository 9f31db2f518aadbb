#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "capclust/graph.hpp"
#include "capclust/hash.hpp"

namespace capclust {

/// Erdős–Rényi G(n, edge_prob) with weights uniform in 1..w_max.
///
/// Pairs are visited in lexicographic order and each consumes exactly one draw
/// for presence (and one for the weight when present), so the output is a pure
/// function of the arguments on every platform.
inline Graph gen_random(std::size_t n, double edge_prob, Weight w_max, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random: n must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("gen_random: edge_prob must be in [0, 1]");
  }
  if (w_max < 1) throw std::invalid_argument("gen_random: w_max must be >= 1");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (rng.unit() < edge_prob) {
        const Weight w = 1 + static_cast<Weight>(rng.below(static_cast<std::uint64_t>(w_max)));
        edges.push_back({u, v, w});
      }
    }
  }
  return Graph(n, std::move(edges));
}

inline Graph gen_path(std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) edges.push_back({v - 1, v, 1});
  return Graph(n, std::move(edges));
}

inline Graph gen_cycle(std::size_t n) {
  if (n < 3) throw std::invalid_argument("gen_cycle: n must be >= 3");
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) edges.push_back({v - 1, v, 1});
  edges.push_back({0, static_cast<VertexId>(n - 1), 1});
  return Graph(n, std::move(edges));
}

/// Star on n vertices: vertex 0 joined to 1..n-1.
inline Graph gen_star(std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) edges.push_back({0, v, 1});
  return Graph(n, std::move(edges));
}

inline Graph gen_complete(std::size_t n) { return gen_random(n, 1.0, 1, 0); }

/// width x height grid, vertex (x, y) has id y * width + x. With w_max > 1 the
/// weights are uniform in 1..w_max, drawn from `seed` in edge order.
inline Graph gen_grid(std::size_t width, std::size_t height, Weight w_max = 1, std::uint64_t seed = 0) {
  if (w_max < 1) throw std::invalid_argument("gen_grid: w_max must be >= 1");
  SplitMix64 rng(seed);
  auto weight = [&]() -> Weight {
    return w_max == 1 ? 1 : 1 + static_cast<Weight>(rng.below(static_cast<std::uint64_t>(w_max)));
  };
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const auto id = static_cast<VertexId>(y * width + x);
      if (x + 1 < width) edges.push_back({id, id + 1, weight()});
      if (y + 1 < height) edges.push_back({id, static_cast<VertexId>(id + width), weight()});
    }
  }
  return Graph(width * height, std::move(edges));
}

/// Random recursive tree: vertex i > 0 attaches to a uniform vertex in [0, i).
inline Graph gen_tree(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  for (VertexId v = 1; v < n; ++v) {
    edges.push_back({static_cast<VertexId>(rng.below(v)), v, 1});
  }
  return Graph(n, std::move(edges));
}

class GeneratorSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(std::string_view text, std::string_view spec) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw GeneratorSpecError("bad number '" + std::string(text) + "' in generator spec '" +
                             std::string(spec) + "'");
  }
  return value;
}

}  // namespace detail

/// Builds a graph from an inline spec:
///   er:n:p[:wmax]   path:n   cycle:n   star:n   complete:n
///   grid:w:h[:wmax]   tree:n[:seed]
/// Randomized generators without an explicit seed draw from `seed`.
inline Graph generate(std::string_view spec, std::uint64_t seed) {
  const auto parts = detail::split(spec, ':');
  const auto kind = parts.front();
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      throw GeneratorSpecError("wrong number of fields in generator spec '" + std::string(spec) + "'");
    }
  };
  auto size_at = [&](std::size_t i) { return detail::parse_number<std::size_t>(parts[i], spec); };

  if (kind == "er") {
    arity(2, 3);
    const double p = detail::parse_number<double>(parts[2], spec);
    const Weight w = parts.size() > 3 ? detail::parse_number<Weight>(parts[3], spec) : 1;
    return gen_random(size_at(1), p, w, derive_seed(seed, "graph"));
  }
  if (kind == "grid") {
    arity(2, 3);
    const Weight w = parts.size() > 3 ? detail::parse_number<Weight>(parts[3], spec) : 1;
    return gen_grid(size_at(1), size_at(2), w, derive_seed(seed, "graph"));
  }
  if (kind == "tree") {
    arity(1, 2);
    const std::uint64_t s =
        parts.size() > 2 ? detail::parse_number<std::uint64_t>(parts[2], spec) : derive_seed(seed, "graph");
    return gen_tree(size_at(1), s);
  }
  if (kind == "path") {
    arity(1, 1);
    return gen_path(size_at(1));
  }
  if (kind == "cycle") {
    arity(1, 1);
    return gen_cycle(size_at(1));
  }
  if (kind == "star") {
    arity(1, 1);
    return gen_star(size_at(1));
  }
  if (kind == "complete") {
    arity(1, 1);
    return gen_complete(size_at(1));
  }
  throw GeneratorSpecError("unknown generator '" + std::string(kind) + "'");
}

}  // namespace capclust
