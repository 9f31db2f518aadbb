#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace capclust {

using VertexId = std::uint32_t;
using Weight = std::int64_t;
using Dist = std::int64_t;

inline constexpr Dist kUnreachable = std::numeric_limits<Dist>::max();
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 1;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  VertexId id = 0;
  Weight w = 1;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind { malformed, out_of_range, self_loop, duplicate_edge, bad_weight, edge_count };

inline std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::malformed: return "malformed line";
    case ParseErrorKind::out_of_range: return "vertex id out of range";
    case ParseErrorKind::self_loop: return "self-loop";
    case ParseErrorKind::duplicate_edge: return "duplicate edge";
    case ParseErrorKind::bad_weight: return "weight must be a positive integer";
    case ParseErrorKind::edge_count: return "edge count does not match header";
  }
  return "unknown";
}

class ParseError : public GraphError {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : GraphError("line " + std::to_string(line) + ": " + std::string(to_string(kind)) +
                   (detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

/// a + b for distances; throws on signed overflow.
inline Dist checked_add(Dist a, Dist b) {
  Dist out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("distance overflow");
  return out;
}

/// Immutable undirected graph with positive integer weights on vertices 0..n-1.
///
/// Edges are stored canonically (u < v, sorted), adjacency lists are sorted by
/// neighbor id. Self-loops, parallel edges and non-positive weights are rejected.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n) : Graph(n, {}) {}

  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ >= kNoVertex) throw GraphError("too many vertices");
    for (auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw GraphError("edge endpoint out of range");
      if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
      if (e.w < 1) throw GraphError("edge weight must be >= 1");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
        throw GraphError("duplicate edge " + std::to_string(edges_[i].u) + "-" +
                         std::to_string(edges_[i].v));
      }
    }

    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adjacency_[fill[e.u]++] = {e.v, e.w};
      adjacency_[fill[e.v]++] = {e.u, e.w};
      max_weight_ = std::max(max_weight_, e.w);
    }
    for (std::size_t v = 0; v < n_; ++v) {
      std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    }
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const Neighbor> neighbors(VertexId v) const noexcept {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  /// Declared maximum weight W (1 for edgeless graphs).
  Weight max_weight() const noexcept { return max_weight_; }
  bool unweighted() const noexcept { return max_weight_ == 1; }

  std::optional<Weight> weight(VertexId u, VertexId v) const {
    auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v,
                               [](const Neighbor& a, VertexId id) { return a.id < id; });
    if (it == adj.end() || it->id != v) return std::nullopt;
    return it->w;
  }
  bool has_edge(VertexId u, VertexId v) const { return weight(u, v).has_value(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  Weight max_weight_ = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits on whitespace and parses every token as a non-negative integer.
inline std::optional<std::vector<std::uint64_t>> parse_uints(std::string_view line) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::uint64_t value = 0;
    std::size_t digits = 0;
    for (; i < line.size() && line[i] >= '0' && line[i] <= '9'; ++i, ++digits) {
      const std::uint64_t d = static_cast<std::uint64_t>(line[i] - '0');
      if (value > (std::numeric_limits<std::uint64_t>::max() - d) / 10) return std::nullopt;
      value = value * 10 + d;
    }
    if (digits == 0) return std::nullopt;
    if (i < line.size() && line[i] != ' ' && line[i] != '\t') return std::nullopt;
    out.push_back(value);
  }
  return out;
}

}  // namespace detail

/// Parses the "n m" header followed by m lines "u v [w]".
///
/// Blank lines and lines starting with '#' are ignored. Every error names the
/// 1-based line it was detected on.
inline Graph load_edge_list(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    while (std::getline(in, raw)) {
      ++line_no;
      auto line = detail::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      return line;
    }
    return std::nullopt;
  };

  auto header_line = next_line();
  if (!header_line) throw ParseError(ParseErrorKind::malformed, line_no + 1, "missing header");
  auto header = detail::parse_uints(*header_line);
  if (!header || header->size() != 2) {
    throw ParseError(ParseErrorKind::malformed, line_no, "expected \"n m\"");
  }
  const std::uint64_t n = (*header)[0];
  const std::uint64_t m = (*header)[1];
  if (n >= kNoVertex) throw ParseError(ParseErrorKind::out_of_range, line_no, "n too large");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(m, 1u << 20)));
  std::vector<std::pair<std::pair<VertexId, VertexId>, std::size_t>> seen;
  seen.reserve(edges.capacity());
  for (std::uint64_t i = 0; i < m; ++i) {
    auto line = next_line();
    if (!line) {
      throw ParseError(ParseErrorKind::edge_count, line_no + 1,
                       "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    }
    auto fields = detail::parse_uints(*line);
    if (!fields || fields->size() < 2 || fields->size() > 3) {
      throw ParseError(ParseErrorKind::malformed, line_no, "expected \"u v [w]\"");
    }
    const auto u = (*fields)[0];
    const auto v = (*fields)[1];
    if (u >= n || v >= n) {
      throw ParseError(ParseErrorKind::out_of_range, line_no,
                       std::to_string(std::max(u, v)) + " >= " + std::to_string(n));
    }
    if (u == v) throw ParseError(ParseErrorKind::self_loop, line_no, "vertex " + std::to_string(u));
    std::uint64_t w = 1;
    if (fields->size() == 3) {
      w = (*fields)[2];
      if (w < 1 || w > static_cast<std::uint64_t>(std::numeric_limits<Weight>::max() / 4)) {
        throw ParseError(ParseErrorKind::bad_weight, line_no, std::to_string(w));
      }
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), static_cast<Weight>(w)});
    seen.push_back({{static_cast<VertexId>(std::min(u, v)), static_cast<VertexId>(std::max(u, v))},
                    line_no});
  }
  if (next_line()) {
    throw ParseError(ParseErrorKind::edge_count, line_no, "more edge lines than declared");
  }

  // Report the later of two duplicate lines.
  std::stable_sort(seen.begin(), seen.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::optional<std::size_t> dup_line;
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i].first == seen[i - 1].first) {
      const auto line = std::max(seen[i].second, seen[i - 1].second);
      dup_line = dup_line ? std::min(*dup_line, line) : line;
    }
  }
  if (dup_line) throw ParseError(ParseErrorKind::duplicate_edge, *dup_line, "");

  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

inline Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in);
}

inline void write_edge_list(std::ostream& out, std::size_t n, std::span<const Edge> edges) {
  out << n << ' ' << edges.size() << '\n';
  for (const auto& e : edges) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  write_edge_list(out, g.num_vertices(), g.edges());
}

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

/// Single-source shortest path distances; unreachable vertices get kUnreachable.
inline std::vector<Dist> sssp(const Graph& g, VertexId src) {
  if (src >= g.num_vertices()) throw GraphError("source out of range");
  std::vector<Dist> dist(g.num_vertices(), kUnreachable);
  using Item = std::pair<Dist, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0;
  heap.push({0, src});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d != dist[v]) continue;
    for (const auto& nb : g.neighbors(v)) {
      const Dist nd = checked_add(d, nb.w);
      if (nd < dist[nb.id]) {
        dist[nb.id] = nd;
        heap.push({nd, nb.id});
      }
    }
  }
  return dist;
}

/// Component label per vertex: the minimum vertex id of its connected component.
inline std::vector<VertexId> connected_components(const Graph& g) {
  std::vector<VertexId> label(g.num_vertices(), kNoVertex);
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < g.num_vertices(); ++root) {
    if (label[root] != kNoVertex) continue;
    label[root] = root;
    stack.push_back(root);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(v)) {
        if (label[nb.id] == kNoVertex) {
          label[nb.id] = root;
          stack.push_back(nb.id);
        }
      }
    }
  }
  return label;
}

}  // namespace capclust
