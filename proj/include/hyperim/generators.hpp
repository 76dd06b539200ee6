#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperim/hypergraph.hpp"
#include "hyperim/rng.hpp"

namespace hyperim {

enum class GeneratorFamily { scale_free, erdos_renyi, d_uniform };

inline const char* to_string(GeneratorFamily f) {
  switch (f) {
    case GeneratorFamily::scale_free: return "scale_free";
    case GeneratorFamily::erdos_renyi: return "erdos_renyi";
    case GeneratorFamily::d_uniform: return "d_uniform";
  }
  return "?";
}

inline GeneratorFamily parse_family(const std::string& s) {
  if (s == "scale_free" || s == "sf") return GeneratorFamily::scale_free;
  if (s == "erdos_renyi" || s == "er") return GeneratorFamily::erdos_renyi;
  if (s == "d_uniform" || s == "uniform") return GeneratorFamily::d_uniform;
  throw std::invalid_argument("unknown generator family '" + s + "'");
}

struct GenSpec {
  GeneratorFamily family = GeneratorFamily::scale_free;
  std::size_t num_nodes = 1000;
  std::size_t num_hyperedges = 1000;
  double exponent = 2.0;     // scale_free
  double probability = 0.0;  // erdos_renyi
  std::size_t uniform_size = 3;  // d_uniform
  // scale_free cutoffs; 0 selects the default (1 and the structural cutoff)
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  std::uint64_t rng_seed = 1;
};

inline void validate(const GenSpec& spec) {
  if (spec.num_nodes == 0) throw std::invalid_argument("generator: num_nodes must be positive");
  switch (spec.family) {
    case GeneratorFamily::scale_free:
      if (!(spec.exponent > 1.0)) throw std::invalid_argument("generator: exponent must be > 1");
      break;
    case GeneratorFamily::erdos_renyi:
      if (!(spec.probability >= 0.0 && spec.probability <= 1.0)) {
        throw std::invalid_argument("generator: probability must lie in [0, 1]");
      }
      break;
    case GeneratorFamily::d_uniform:
      if (spec.uniform_size < 2 || spec.uniform_size > spec.num_nodes) {
        throw std::invalid_argument("generator: uniform size must satisfy 2 <= d <= N");
      }
      break;
  }
}

namespace detail {

/// Inverse-CDF sampler for p(d) ∝ d^-alpha on [lo, hi].
class PowerLawSampler {
 public:
  PowerLawSampler(double alpha, std::size_t lo, std::size_t hi) : lo_(lo) {
    cdf_.reserve(hi - lo + 1);
    double acc = 0.0;
    for (std::size_t d = lo; d <= hi; ++d) {
      acc += std::pow(static_cast<double>(d), -alpha);
      cdf_.push_back(acc);
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    return lo_ + static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::size_t lo_;
  std::vector<double> cdf_;
};

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

/// Structural cutoff ceil(sqrt(N*M)) further bounded by N-1.
inline std::size_t structural_cutoff(std::size_t n, std::size_t m) {
  const auto c = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n) * static_cast<double>(m))));
  return std::max<std::size_t>(1, std::min(c, n > 1 ? n - 1 : 1));
}

/// Bipartite Chung-Lu hypergraph with power-law hyperdegrees and sizes.
///
/// Node i joins hyperedge a with probability min(1, h_i * s_a / sum(h)),
/// sampled with the Miller-Hagberg skipping scheme over nodes sorted by
/// target hyperdegree. Hyperedges left with fewer than two members are
/// dropped.
inline Hypergraph gen_sf_chunglu(const GenSpec& spec) {
  if (spec.family != GeneratorFamily::scale_free) throw std::invalid_argument("gen_sf_chunglu: wrong family");
  validate(spec);
  const std::size_t n = spec.num_nodes;
  const std::size_t m = spec.num_hyperedges;
  if (m == 0) return Hypergraph(n, {});
  const std::size_t lo = spec.min_degree ? spec.min_degree : 1;
  const std::size_t cut = spec.max_degree ? spec.max_degree : structural_cutoff(n, m);
  if (lo > cut) throw std::invalid_argument("gen_sf_chunglu: min_degree exceeds max_degree");
  if (std::min(cut, m) < lo || cut > n) {
    throw std::invalid_argument("gen_sf_chunglu: infeasible cutoffs [" + std::to_string(lo) + ", " +
                                std::to_string(cut) + "] for N=" + std::to_string(n) +
                                ", M=" + std::to_string(m));
  }

  Rng rng(spec.rng_seed);
  const detail::PowerLawSampler hyperdegree_dist(spec.exponent, lo, std::min(cut, m));
  const detail::PowerLawSampler size_dist(spec.exponent, lo, cut);
  std::vector<double> h(n);
  for (auto& x : h) x = static_cast<double>(hyperdegree_dist(rng));
  std::vector<double> s(m);
  for (auto& x : s) x = static_cast<double>(size_dist(rng));

  const double total_h = std::accumulate(h.begin(), h.end(), 0.0);
  const double total_s = std::accumulate(s.begin(), s.end(), 0.0);
  if (total_s > 0.5 * static_cast<double>(n) * static_cast<double>(m)) {
    throw std::invalid_argument("gen_sf_chunglu: sum of hyperedge sizes " + std::to_string(total_s) +
                                " exceeds half of N*M; not a sparse Chung-Lu regime");
  }

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return h[a] > h[b]; });

  std::vector<std::vector<NodeId>> edges;
  edges.reserve(m);
  std::vector<NodeId> members;
  for (std::size_t a = 0; a < m; ++a) {
    members.clear();
    const double scale = s[a] / total_h;
    std::size_t pos = 0;
    double p = std::min(1.0, h[order[0]] * scale);
    while (pos < n && p > 0.0) {
      if (p < 1.0) {
        const auto skip = rng.geometric_skip(p);
        if (skip >= n - pos) break;
        pos += skip;
      }
      const double q = std::min(1.0, h[order[pos]] * scale);
      if (rng.uniform() < q / p) members.push_back(order[pos]);
      p = q;
      ++pos;
    }
    if (members.size() >= 2) edges.push_back(members);
  }
  return Hypergraph(n, std::move(edges));
}

/// Bipartite Erdős–Rényi hypergraph: every (node, hyperedge) membership
/// present independently with probability p. Empty hyperedges are dropped.
inline Hypergraph gen_er_bipartite(const GenSpec& spec) {
  if (spec.family != GeneratorFamily::erdos_renyi) throw std::invalid_argument("gen_er_bipartite: wrong family");
  validate(spec);
  const std::size_t n = spec.num_nodes;
  const std::size_t m = spec.num_hyperedges;
  const double p = spec.probability;
  std::vector<std::vector<NodeId>> edges;
  if (p <= 0.0 || m == 0) return Hypergraph(n, {});

  Rng rng(spec.rng_seed);
  std::vector<std::vector<NodeId>> buckets(m);
  const std::uint64_t total = static_cast<std::uint64_t>(n) * m;
  std::uint64_t pos = 0;
  while (true) {
    const auto skip = rng.geometric_skip(p);
    if (skip >= total - pos) break;
    pos += skip;
    buckets[pos / n].push_back(static_cast<NodeId>(pos % n));
    if (++pos >= total) break;
  }
  for (auto& b : buckets)
    if (!b.empty()) edges.push_back(std::move(b));
  return Hypergraph(n, std::move(edges));
}

/// M distinct uniformly random d-subsets of the node set.
inline Hypergraph gen_d_uniform(const GenSpec& spec) {
  if (spec.family != GeneratorFamily::d_uniform) throw std::invalid_argument("gen_d_uniform: wrong family");
  validate(spec);
  const std::size_t n = spec.num_nodes;
  const std::size_t d = spec.uniform_size;
  const std::size_t m = spec.num_hyperedges;
  const double possible = detail::binomial(n, d);
  if (static_cast<double>(m) > possible) {
    throw std::invalid_argument("gen_d_uniform: M = " + std::to_string(m) + " exceeds C(N, d) = " +
                                std::to_string(possible));
  }
  Rng rng(spec.rng_seed);
  std::vector<std::vector<NodeId>> edges;
  edges.reserve(m);

  if (2.0 * static_cast<double>(m) > possible) {
    // Dense request: enumerate every d-subset and take a uniform prefix.
    std::vector<std::vector<NodeId>> all;
    std::vector<NodeId> comb(d);
    std::iota(comb.begin(), comb.end(), NodeId{0});
    while (true) {
      all.push_back(comb);
      std::size_t i = d;
      while (i > 0 && comb[i - 1] == n - d + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < d; ++j) comb[j] = comb[j - 1] + 1;
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto j = i + rng.below(all.size() - i);
      std::swap(all[i], all[j]);
      edges.push_back(all[i]);
    }
    return Hypergraph(n, std::move(edges));
  }

  std::set<std::vector<NodeId>> seen;
  std::vector<NodeId> subset;
  while (edges.size() < m) {
    // Floyd's sampling of a d-subset of [0, n).
    subset.clear();
    for (std::size_t j = n - d; j < n; ++j) {
      const auto t = static_cast<NodeId>(rng.below(j + 1));
      if (std::find(subset.begin(), subset.end(), t) == subset.end()) {
        subset.push_back(t);
      } else {
        subset.push_back(static_cast<NodeId>(j));
      }
    }
    std::sort(subset.begin(), subset.end());
    if (seen.insert(subset).second) edges.push_back(subset);
  }
  return Hypergraph(n, std::move(edges));
}

inline Hypergraph generate(const GenSpec& spec) {
  switch (spec.family) {
    case GeneratorFamily::scale_free: return gen_sf_chunglu(spec);
    case GeneratorFamily::erdos_renyi: return gen_er_bipartite(spec);
    case GeneratorFamily::d_uniform: return gen_d_uniform(spec);
  }
  throw std::invalid_argument("generate: unknown family");
}

/// Membership probability giving an expected binary degree near `mean_degree`
/// for an ER hypergraph with the given N and M (sparse approximation
/// <d_N> ≈ M p (N-1) p).
inline double er_probability_for_mean_degree(std::size_t n, std::size_t m, double mean_degree) {
  return std::min(1.0, std::sqrt(mean_degree / (static_cast<double>(m) * static_cast<double>(n - 1))));
}

/// Hyperedge count giving a d-uniform hypergraph mean degree near
/// `mean_degree` (each hyperedge adds d-1 neighbors to each member).
inline std::size_t d_uniform_edges_for_mean_degree(std::size_t n, std::size_t d, double mean_degree) {
  return static_cast<std::size_t>(
      std::llround(mean_degree * static_cast<double>(n) / static_cast<double>(d * (d - 1))));
}

}  // namespace hyperim
