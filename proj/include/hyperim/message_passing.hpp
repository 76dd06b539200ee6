#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "hyperim/dynamics.hpp"
#include "hyperim/hypergraph.hpp"
#include "hyperim/parallel.hpp"
#include "hyperim/rng.hpp"

namespace hyperim {

/// Cavity messages S/I/R_{i->j} per directed link, plus the node marginals
/// evolved alongside them with the full (non-cavity) product.
struct MessageState {
  std::vector<double> s, i, r;
  std::vector<double> node_s, node_i, node_r;
  std::size_t t = 0;

  /// I_{i->j}(0) = 1 for seeds i, otherwise S_{i->j}(0) = 1.
  static MessageState seeded(const HypergraphViews& views, std::span<const NodeId> seeds) {
    const auto& links = views.links;
    const std::size_t n = views.num_nodes();
    std::vector<std::uint8_t> is_seed(n, 0);
    for (NodeId v : seeds) {
      if (v >= n) throw std::out_of_range("MessageState: seed out of range");
      is_seed[v] = 1;
    }
    MessageState m;
    m.s.assign(links.size(), 1.0);
    m.i.assign(links.size(), 0.0);
    m.r.assign(links.size(), 0.0);
    for (LinkId e = 0; e < links.size(); ++e) {
      if (is_seed[links.source[e]]) {
        m.s[e] = 0.0;
        m.i[e] = 1.0;
      }
    }
    m.node_s.assign(n, 1.0);
    m.node_i.assign(n, 0.0);
    m.node_r.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      if (is_seed[v]) {
        m.node_s[v] = 0.0;
        m.node_i[v] = 1.0;
      }
    }
    return m;
  }
};

namespace detail {

/// Probability that node i escapes infection in one step given the incoming
/// infection messages, excluding every interaction through `cavity`
/// (pass kNoNode for the full product).
inline double escape_product(const HypergraphViews& views, std::span<const double> inf, NodeId i,
                             NodeId cavity, double beta1, double beta2) {
  const auto& adj = views.adjacency;
  const auto& links = views.links;
  double prod = 1.0;
  if (beta1 != 0.0) {
    const auto nb = adj.neighbors(i);
    const auto w = adj.weights(i);
    const auto in = links.in_links(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] == cavity) continue;
      const double x = inf[in[p]];
      if (x != 0.0) prod *= std::pow(1.0 - beta1 * x, static_cast<double>(w[p]));
    }
  }
  if (beta2 != 0.0) {
    const auto& tri = views.simplices;
    for (auto t : tri.triples_of(i)) {
      const auto& m = tri.triples[t];
      const NodeId a = m[0] == i ? m[1] : m[0];
      const NodeId b = m[2] == i ? m[1] : m[2];
      if (a == cavity || b == cavity) continue;
      const double x = inf[links.lookup(a, i)] * inf[links.lookup(b, i)];
      if (x != 0.0) prod *= std::pow(1.0 - beta2 * x, static_cast<double>(tri.weight[t]));
    }
  }
  return prod;
}

}  // namespace detail

/// One synchronous update of the cavity equations (S, I, R per link) and of
/// the node marginals.
inline MessageState mp_step(const MessageState& msgs, const HypergraphViews& views, const EpidemicParams& params) {
  const auto& links = views.links;
  const double retain = 1.0 - 1.0 / params.gamma;
  const double recover = 1.0 / params.gamma;
  MessageState next;
  next.t = msgs.t + 1;
  next.s.resize(links.size());
  next.i.resize(links.size());
  next.r.resize(links.size());
  for (LinkId e = 0; e < links.size(); ++e) {
    const double prod = detail::escape_product(views, msgs.i, links.source[e], links.target[e],
                                               params.beta1, params.beta2);
    next.s[e] = msgs.s[e] * prod;
    next.i[e] = msgs.s[e] * (1.0 - prod) + msgs.i[e] * retain;
    next.r[e] = msgs.r[e] + msgs.i[e] * recover;
  }
  const std::size_t n = views.num_nodes();
  next.node_s.resize(n);
  next.node_i.resize(n);
  next.node_r.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    const double prod = detail::escape_product(views, msgs.i, v, kNoNode, params.beta1, params.beta2);
    next.node_s[v] = msgs.node_s[v] * prod;
    next.node_i[v] = msgs.node_s[v] * (1.0 - prod) + msgs.node_i[v] * retain;
    next.node_r[v] = msgs.node_r[v] + msgs.node_i[v] * recover;
  }
  return next;
}

/// Largest violation of the quasi-stationary conditions
/// S = S·Π and I = γ·S·(1 − Π) over all links.
inline double steady_state_residual(const MessageState& msgs, const HypergraphViews& views,
                                    const EpidemicParams& params) {
  const auto& links = views.links;
  double worst = 0.0;
  for (LinkId e = 0; e < links.size(); ++e) {
    const double prod = detail::escape_product(views, msgs.i, links.source[e], links.target[e],
                                               params.beta1, params.beta2);
    worst = std::max(worst, std::abs(msgs.s[e] * prod - msgs.s[e]));
    worst = std::max(worst, std::abs(params.gamma * msgs.s[e] * (1.0 - prod) - msgs.i[e]));
  }
  return worst;
}

struct MpSolution {
  MessageState state;
  bool converged = false;
  std::size_t iterations = 0;
  double last_change = 0.0;        // max per-link change of the final step
  double steady_residual = 0.0;    // see steady_state_residual
  std::vector<double> trace;       // max change per iteration
};

inline MpSolution mp_solve(const HypergraphViews& views, const EpidemicParams& params,
                           std::span<const NodeId> seeds, double tol = 1e-12, std::size_t max_iters = 10000) {
  if (!(tol > 0.0)) throw std::invalid_argument("mp_solve: tol must be positive");
  validate(params);
  MpSolution sol;
  sol.state = MessageState::seeded(views, seeds);
  for (std::size_t it = 0; it < max_iters; ++it) {
    auto next = mp_step(sol.state, views, params);
    double change = 0.0;
    for (std::size_t e = 0; e < next.s.size(); ++e) {
      change = std::max({change, std::abs(next.s[e] - sol.state.s[e]), std::abs(next.i[e] - sol.state.i[e]),
                         std::abs(next.r[e] - sol.state.r[e])});
    }
    sol.state = std::move(next);
    sol.iterations = it + 1;
    sol.last_change = change;
    sol.trace.push_back(change);
    if (change < tol) {
      sol.converged = true;
      break;
    }
  }
  sol.steady_residual = steady_state_residual(sol.state, views, params);
  return sol;
}

struct NodeMarginal {
  double s = 1.0, i = 0.0, r = 0.0;
};

inline std::vector<NodeMarginal> node_marginals(const MessageState& msgs) {
  std::vector<NodeMarginal> out(msgs.node_s.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = {msgs.node_s[v], msgs.node_i[v], msgs.node_r[v]};
  return out;
}

/// Weighted non-backtracking operator C = β₁γ·N_w over directed links.
///
/// Row i->j holds A_ik at column k->i for every neighbor k != j of i. The
/// integer skeleton N_w is stored once; `scale` carries β₁γ.
struct WnbOperator {
  std::size_t dim = 0;
  double scale = 0.0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<LinkId> cols;
  std::vector<std::uint32_t> weights;

  std::size_t nnz() const noexcept { return cols.size(); }
  double value(std::size_t p) const { return scale * weights[p]; }

  /// y = N_w x (skeleton, without the β₁γ factor).
  void apply_skeleton(std::span<const double> x, std::span<double> y, std::size_t threads = 1) const {
    auto rows = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t r = lo; r < hi; ++r) {
        double acc = 0.0;
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) acc += weights[p] * x[cols[p]];
        y[r] = acc;
      }
    };
    if (threads <= 1 || dim < 4096) {
      rows(0, dim);
      return;
    }
    const std::size_t chunk = (dim + threads - 1) / threads;
    parallel_for(threads, [&](std::size_t t) { rows(t * chunk, std::min(dim, (t + 1) * chunk)); }, threads);
  }

  /// y = C x.
  void apply(std::span<const double> x, std::span<double> y, std::size_t threads = 1) const {
    apply_skeleton(x, y, threads);
    for (auto& v : y) v *= scale;
  }

  /// Coordinate-format dump: one "row col value" line per structural entry.
  void write_coordinates(std::ostream& os) const {
    os.precision(17);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) os << r << ' ' << cols[p] << ' ' << value(p) << '\n';
  }
};

inline WnbOperator build_wnb(const HypergraphViews& views, double beta1, std::uint32_t gamma) {
  const auto& links = views.links;
  const auto& adj = views.adjacency;
  WnbOperator op;
  op.dim = links.size();
  op.scale = beta1 * static_cast<double>(gamma);
  op.row_ptr.reserve(op.dim + 1);
  for (LinkId e = 0; e < links.size(); ++e) {
    const NodeId i = links.source[e];
    const NodeId j = links.target[e];
    const auto nb = adj.neighbors(i);
    const auto w = adj.weights(i);
    const auto in = links.in_links(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] == j) continue;
      op.cols.push_back(in[p]);
      op.weights.push_back(w[p]);
    }
    op.row_ptr.push_back(op.cols.size());
  }
  return op;
}

struct PowerOptions {
  double tol = 1e-10;           // on successive eigenvalue estimates, relative to max(1, λ)
  double residual_tol = 1e-8;   // on ‖Cv − λv‖₁/‖v‖₁, relative to max(1, λ)
  std::size_t max_iters = 100000;
  std::uint64_t start_seed = 0;  // 0: all-ones start; otherwise positive random start
  std::size_t threads = 1;
};

struct SpectralResult {
  double lambda = 0.0;
  std::vector<double> eigvec;  // nonnegative, unit 1-norm
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

namespace detail {

/// True when the operator's pattern has no directed cycle, i.e. every power
/// beyond dim vanishes and the spectral radius is exactly zero.
inline bool nilpotent(const WnbOperator& op) {
  std::vector<std::uint32_t> indegree(op.dim, 0);
  for (auto c : op.cols) ++indegree[c];
  std::vector<std::size_t> ready;
  for (std::size_t r = 0; r < op.dim; ++r)
    if (indegree[r] == 0) ready.push_back(r);
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t r = ready.back();
    ready.pop_back();
    ++removed;
    for (std::size_t p = op.row_ptr[r]; p < op.row_ptr[r + 1]; ++p)
      if (--indegree[op.cols[p]] == 0) ready.push_back(op.cols[p]);
  }
  return removed == op.dim;
}

}  // namespace detail

/// Perron eigenpair of C by power iteration.
///
/// Iterates on the skeleton N_w with a positive diagonal shift (which removes
/// the periodicity NB matrices of bipartite-like structures exhibit) and
/// reports λ_C = β₁γ·ρ(N_w) from the 1-norm growth ratio ‖N_w v‖₁/‖v‖₁.
inline SpectralResult leading_eigen(const WnbOperator& op, const PowerOptions& opts = {}) {
  SpectralResult res;
  const std::size_t dim = op.dim;
  if (dim == 0 || op.nnz() == 0 || op.scale == 0.0) {
    res.converged = true;
    res.eigvec.assign(dim, dim ? 1.0 / static_cast<double>(dim) : 0.0);
    return res;
  }

  if (detail::nilpotent(op)) {
    res.converged = true;
    res.eigvec.assign(dim, 1.0 / static_cast<double>(dim));
    return res;
  }

  std::vector<double> v(dim, 1.0);
  if (opts.start_seed != 0) {
    Rng rng(opts.start_seed);
    for (auto& x : v) x = 0.5 + rng.uniform();
  }
  double norm = 0.0;
  for (double x : v) norm += x;
  for (auto& x : v) x /= norm;

  double total = 0.0;
  for (auto w : op.weights) total += w;
  const double shift = std::max(1.0, total / static_cast<double>(dim)) / 2.0;

  std::vector<double> u(dim);
  double prev = -1.0;
  double rho = 0.0;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    op.apply_skeleton(v, u, opts.threads);
    rho = 0.0;
    for (double x : u) rho += x;
    res.iterations = it + 1;
    if (rho == 0.0) {
      // Nilpotent skeleton (no non-backtracking cycle).
      res.lambda = 0.0;
      res.residual = 0.0;
      res.eigvec = v;
      res.converged = true;
      return res;
    }
    double resid = 0.0;
    for (std::size_t k = 0; k < dim; ++k) resid += std::abs(u[k] - rho * v[k]);
    const double scale = std::max(1.0, rho);
    if (prev >= 0.0 && std::abs(rho - prev) < opts.tol * scale && resid <= opts.residual_tol * scale) {
      res.converged = true;
      res.residual = resid;
      break;
    }
    res.residual = resid;
    prev = rho;
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      u[k] += shift * v[k];
      s += u[k];
    }
    for (std::size_t k = 0; k < dim; ++k) v[k] = u[k] / s;
  }
  res.lambda = op.scale * rho;
  res.residual *= op.scale;
  res.eigvec = std::move(v);
  return res;
}

struct CriticalPoint {
  double beta1_star = std::numeric_limits<double>::infinity();
  double skeleton_radius = 0.0;  // ρ(N_w)
  bool converged = false;
};

/// β₁* = 1/(γ·ρ(N_w)); infinite when N_w is nilpotent (forests).
inline CriticalPoint critical_beta1(const HypergraphViews& views, std::uint32_t gamma, const PowerOptions& opts = {}) {
  if (gamma < 1) throw std::invalid_argument("critical_beta1: gamma must be >= 1");
  const auto skeleton = build_wnb(views, 1.0, 1);
  const auto spec = leading_eigen(skeleton, opts);
  CriticalPoint cp;
  cp.skeleton_radius = spec.lambda;
  cp.converged = spec.converged;
  if (spec.lambda > 0.0) cp.beta1_star = 1.0 / (static_cast<double>(gamma) * spec.lambda);
  return cp;
}

}  // namespace hyperim
