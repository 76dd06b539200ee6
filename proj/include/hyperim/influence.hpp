#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperim/hypergraph.hpp"
#include "hyperim/rng.hpp"

namespace hyperim {

enum class SelectionMethod { cia, degree, hyperdegree, ci_naive, hadp, hsdp, random };

inline constexpr SelectionMethod kAllMethods[] = {SelectionMethod::cia,      SelectionMethod::degree,
                                                  SelectionMethod::hyperdegree, SelectionMethod::ci_naive,
                                                  SelectionMethod::hadp,     SelectionMethod::hsdp,
                                                  SelectionMethod::random};

inline const char* to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::cia: return "CIA";
    case SelectionMethod::degree: return "degree";
    case SelectionMethod::hyperdegree: return "HD";
    case SelectionMethod::ci_naive: return "CI";
    case SelectionMethod::hadp: return "HADP";
    case SelectionMethod::hsdp: return "HSDP";
    case SelectionMethod::random: return "Random";
  }
  return "?";
}

inline SelectionMethod parse_method(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "cia") return SelectionMethod::cia;
  if (s == "degree") return SelectionMethod::degree;
  if (s == "hd" || s == "hyperdegree") return SelectionMethod::hyperdegree;
  if (s == "ci" || s == "ci_naive" || s == "ci-naive") return SelectionMethod::ci_naive;
  if (s == "hadp") return SelectionMethod::hadp;
  if (s == "hsdp") return SelectionMethod::hsdp;
  if (s == "random") return SelectionMethod::random;
  throw std::invalid_argument("unknown selection method '" + s + "'");
}

/// CI₁ scores. `raw[i]` is the integer sum Σ_j A_ij z_i^j (d_N(j) − 1);
/// score[i] = (β₁γ)² · raw[i].
struct CiScores {
  std::vector<double> score;
  std::vector<std::uint64_t> raw;
  double beta1 = 0.0;
  std::uint32_t gamma = 1;
  int radius = 1;
};

inline CiScores collective_influence(const AdjacencyView& adj, double beta1, std::uint32_t gamma) {
  const std::size_t n = adj.num_nodes;
  CiScores ci;
  ci.beta1 = beta1;
  ci.gamma = gamma;
  ci.raw.assign(n, 0);
  ci.score.assign(n, 0.0);
  const double factor = (beta1 * gamma) * (beta1 * gamma);

  // row[k] holds A_ik for the current i.
  std::vector<std::uint32_t> row(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = adj.neighbors(i);
    const auto w = adj.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) row[nb[p]] = w[p];
    std::uint64_t total = 0;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const NodeId j = nb[p];
      if (adj.node_degree[j] <= 1) continue;
      std::uint64_t z = 0;
      for (NodeId k : adj.neighbors(j)) z += row[k];
      total += static_cast<std::uint64_t>(w[p]) * z * (adj.node_degree[j] - 1);
    }
    for (NodeId k : nb) row[k] = 0;
    ci.raw[i] = total;
    ci.score[i] = factor * static_cast<double>(total);
  }
  return ci;
}

/// Nodes sorted by score descending, then weighted degree descending, then id.
template <typename Score>
std::vector<NodeId> ranked_order(const AdjacencyView& adj, std::span<const Score> score) {
  std::vector<NodeId> order(adj.num_nodes);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (score[a] != score[b]) return score[a] > score[b];
    if (adj.weighted_degree[a] != adj.weighted_degree[b]) return adj.weighted_degree[a] > adj.weighted_degree[b];
    return a < b;
  });
  return order;
}

struct SeedSet {
  std::vector<NodeId> nodes;  // in selection order
  SelectionMethod method = SelectionMethod::cia;
  std::size_t fallback_admitted = 0;  // CIA only: seeds admitted after candidate exhaustion
};

inline void check_k(const AdjacencyView& adj, std::size_t k) {
  if (k > adj.num_nodes) {
    throw std::invalid_argument("seed count k = " + std::to_string(k) + " exceeds N = " +
                                std::to_string(adj.num_nodes));
  }
}

/// Collective Influence Adaptive selection.
///
/// Walks candidates in CI order and discards any candidate adjacent to an
/// already chosen seed. When candidates run out before k seeds, discarded
/// candidates are admitted in the same order.
inline SeedSet cia_select(const AdjacencyView& adj, const CiScores& scores, std::size_t k) {
  check_k(adj, k);
  SeedSet out;
  out.method = SelectionMethod::cia;
  const auto order = ranked_order<double>(adj, scores.score);
  std::vector<std::uint8_t> blocked(adj.num_nodes, 0);
  std::vector<NodeId> discarded;
  for (NodeId v : order) {
    if (out.nodes.size() == k) break;
    if (blocked[v]) {
      discarded.push_back(v);
      continue;
    }
    out.nodes.push_back(v);
    for (NodeId u : adj.neighbors(v)) blocked[u] = 1;
  }
  for (std::size_t p = 0; out.nodes.size() < k && p < discarded.size(); ++p) {
    out.nodes.push_back(discarded[p]);
    ++out.fallback_admitted;
  }
  return out;
}

namespace detail {

inline std::size_t shared_neighbors(const AdjacencyView& adj, NodeId a, NodeId b) {
  const auto x = adj.neighbors(a);
  const auto y = adj.neighbors(b);
  std::size_t c = 0;
  for (std::size_t p = 0, q = 0; p < x.size() && q < y.size();) {
    if (x[p] < y[q]) {
      ++p;
    } else if (y[q] < x[p]) {
      ++q;
    } else {
      ++c, ++p, ++q;
    }
  }
  return c;
}

template <typename Score>
SeedSet top_k(const AdjacencyView& adj, std::span<const Score> score, std::size_t k, SelectionMethod m) {
  SeedSet out;
  out.method = m;
  const auto order = ranked_order<Score>(adj, score);
  out.nodes.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

/// Greedy pick of the current maximum adaptive degree; after each pick
/// `penalty(seed, neighbor)` is subtracted from every unpicked neighbor
/// (clamped at zero).
template <typename Penalty>
SeedSet adaptive_degree(const AdjacencyView& adj, std::size_t k, SelectionMethod m, Penalty penalty) {
  SeedSet out;
  out.method = m;
  const std::size_t n = adj.num_nodes;
  std::vector<std::int64_t> current(n);
  for (NodeId v = 0; v < n; ++v) current[v] = adj.node_degree[v];
  std::vector<std::uint8_t> picked(n, 0);

  struct Entry {
    std::int64_t score;
    std::uint64_t wdeg;
    NodeId id;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.wdeg != b.wdeg) return a.wdeg < b.wdeg;
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (NodeId v = 0; v < n; ++v) heap.push({current[v], adj.weighted_degree[v], v});

  while (out.nodes.size() < k && !heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    if (picked[top.id] || top.score != current[top.id]) continue;
    picked[top.id] = 1;
    out.nodes.push_back(top.id);
    for (NodeId j : adj.neighbors(top.id)) {
      if (picked[j]) continue;
      current[j] = std::max<std::int64_t>(0, current[j] - penalty(top.id, j));
      heap.push({current[j], adj.weighted_degree[j], j});
    }
  }
  return out;
}

}  // namespace detail

/// Baselines: degree, hyperdegree, naive CI on hyperdegrees,
/// HADP, HSDP and uniform random selection.
inline SeedSet baseline_select(const AdjacencyView& adj, std::size_t k, SelectionMethod method,
                               std::uint64_t rng_seed = 1) {
  check_k(adj, k);
  const std::size_t n = adj.num_nodes;
  switch (method) {
    case SelectionMethod::degree:
      return detail::top_k<std::uint32_t>(adj, adj.node_degree, k, method);
    case SelectionMethod::hyperdegree:
      return detail::top_k<std::uint32_t>(adj, adj.hyperdegree, k, method);
    case SelectionMethod::ci_naive: {
      std::vector<std::uint64_t> score(n, 0);
      for (NodeId i = 0; i < n; ++i) {
        if (adj.hyperdegree[i] == 0) continue;
        std::uint64_t ball = 0;
        for (NodeId j : adj.neighbors(i)) ball += adj.hyperdegree[j] - 1;
        score[i] = static_cast<std::uint64_t>(adj.hyperdegree[i] - 1) * ball;
      }
      return detail::top_k<std::uint64_t>(adj, score, k, method);
    }
    case SelectionMethod::hadp:
      return detail::adaptive_degree(adj, k, method, [&](NodeId i, NodeId j) {
        return static_cast<std::int64_t>(detail::shared_neighbors(adj, i, j)) + 1;
      });
    case SelectionMethod::hsdp:
      return detail::adaptive_degree(adj, k, method, [](NodeId, NodeId) { return std::int64_t{1}; });
    case SelectionMethod::random: {
      SeedSet out;
      out.method = method;
      std::vector<NodeId> pool(n);
      std::iota(pool.begin(), pool.end(), NodeId{0});
      Rng rng(rng_seed);
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + rng.below(n - i)]);
        out.nodes.push_back(pool[i]);
      }
      return out;
    }
    case SelectionMethod::cia:
      break;
  }
  throw std::invalid_argument(std::string("baseline_select: '") + to_string(method) + "' is not a baseline");
}

/// Dispatches to CIA (scored with β₁, γ) or one of the baselines.
inline SeedSet select_seeds(const AdjacencyView& adj, std::size_t k, SelectionMethod method, double beta1,
                            std::uint32_t gamma, std::uint64_t rng_seed) {
  if (method == SelectionMethod::cia) return cia_select(adj, collective_influence(adj, beta1, gamma), k);
  return baseline_select(adj, k, method, rng_seed);
}

/// Seed count for a percentage of `size`, rounded half-up and at least 1.
inline std::size_t seeds_for_percent(double percent, std::size_t size) {
  if (!(percent > 0.0 && percent <= 100.0)) throw std::invalid_argument("seed percent must lie in (0, 100]");
  const auto k = static_cast<std::size_t>(std::floor(percent / 100.0 * static_cast<double>(size) + 0.5));
  return std::max<std::size_t>(1, std::min(k, size));
}

/// Probability that a uniformly chosen neighbor of a uniformly chosen top-n%
/// node (by score, tie-broken as in ranked_order) is itself in the top n%.
/// Top nodes without neighbors are ignored.
inline double top_overlap_probability(const AdjacencyView& adj, std::span<const double> score, double n_percent) {
  if (!(n_percent > 0.0 && n_percent <= 100.0)) throw std::invalid_argument("n_percent must lie in (0, 100]");
  const std::size_t n = adj.num_nodes;
  if (n == 0) return 0.0;
  const std::size_t top = seeds_for_percent(n_percent, n);
  const auto order = ranked_order<double>(adj, score);
  std::vector<std::uint8_t> in_top(n, 0);
  for (std::size_t p = 0; p < top; ++p) in_top[order[p]] = 1;
  double acc = 0.0;
  std::size_t counted = 0;
  for (std::size_t p = 0; p < top; ++p) {
    const auto nb = adj.neighbors(order[p]);
    if (nb.empty()) continue;
    std::size_t hits = 0;
    for (NodeId u : nb) hits += in_top[u];
    acc += static_cast<double>(hits) / static_cast<double>(nb.size());
    ++counted;
  }
  return counted ? acc / static_cast<double>(counted) : 0.0;
}

}  // namespace hyperim
