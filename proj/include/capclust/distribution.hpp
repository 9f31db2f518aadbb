#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "capclust/hash.hpp"

namespace capclust {

/// Parameters of the capped geometric distribution GeomCap(p, r): the number of
/// failed Bernoulli(p) trials before the first success, truncated at r.
struct GeomCapParams {
  double p = 0.5;
  std::int64_t r = 0;

  GeomCapParams() = default;
  GeomCapParams(double p_, std::int64_t r_) : p(p_), r(r_) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("GeomCap: p must lie in (0, 1)");
    if (r < 0) throw std::invalid_argument("GeomCap: r must be >= 0");
  }
};

/// Per-vertex offsets delta[v] in [0, r].
struct Offsets {
  std::vector<std::int64_t> delta;

  std::size_t size() const noexcept { return delta.size(); }
  std::int64_t operator[](std::size_t v) const { return delta[v]; }
  friend bool operator==(const Offsets&, const Offsets&) = default;
};

/// P[GeomCap(p, r) = i].
inline double geom_cap_pmf(const GeomCapParams& params, std::int64_t i) {
  if (i < 0 || i > params.r) return 0.0;
  const double q = 1.0 - params.p;
  if (i == params.r) return std::pow(q, static_cast<double>(params.r));
  return params.p * std::pow(q, static_cast<double>(i));
}

/// P[GeomCap(p, r) >= i]; equals (1-p)^i on [0, r].
inline double geom_cap_tail(const GeomCapParams& params, std::int64_t i) {
  if (i <= 0) return 1.0;
  if (i > params.r) return 0.0;
  return std::pow(1.0 - params.p, static_cast<double>(i));
}

/// ln P[GeomCap(p, r) = i]; stays accurate where the pmf itself underflows.
inline double geom_cap_log_pmf(const GeomCapParams& params, std::int64_t i) {
  if (i < 0 || i > params.r) return -std::numeric_limits<double>::infinity();
  const double log_q = std::log1p(-params.p);
  if (i == params.r) return static_cast<double>(i) * log_q;
  return std::log(params.p) + static_cast<double>(i) * log_q;
}

inline double geom_cap_log_tail(const GeomCapParams& params, std::int64_t i) {
  if (i <= 0) return 0.0;
  if (i > params.r) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(i) * std::log1p(-params.p);
}

inline double geom_cap_mean(const GeomCapParams& params) {
  double mean = 0.0;
  for (std::int64_t i = 1; i <= params.r; ++i) mean += geom_cap_tail(params, i);
  return mean;
}

/// Inverse-CDF draw from a uniform u in (0, 1]: floor(ln u / ln(1-p)), capped at r.
inline std::int64_t geom_cap_from_uniform(const GeomCapParams& params, double u) {
  const double x = std::log(u) / std::log1p(-params.p);
  if (!(x < static_cast<double>(params.r))) return params.r;
  return static_cast<std::int64_t>(std::floor(x));
}

/// Offset of a single vertex; a pure function of (params, seed, v).
inline std::int64_t sample_offset(const GeomCapParams& params, std::uint64_t seed, std::uint64_t v) {
  return geom_cap_from_uniform(params, to_unit_open_closed(stream_at(seed, v)));
}

inline Offsets sample_offsets(const GeomCapParams& params, std::size_t n, std::uint64_t seed) {
  Offsets out;
  out.delta.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.delta[v] = sample_offset(params, seed, v);
  return out;
}

}  // namespace capclust
