#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperim/hypergraph.hpp"
#include "hyperim/parallel.hpp"
#include "hyperim/rng.hpp"

namespace hyperim {

struct EpidemicParams {
  double beta1 = 0.0;        // per 1-simplex contact per step
  double beta2 = 0.0;        // per fully infected 2-simplex per step
  std::uint32_t gamma = 1;   // infectious period in steps
  std::size_t t_max = 0;     // 0 selects 10 * N
  std::uint64_t rng_seed = 1;
};

inline void validate(const EpidemicParams& p) {
  if (!(p.beta1 >= 0.0 && p.beta1 <= 1.0)) throw std::invalid_argument("beta1 must lie in [0, 1]");
  if (!(p.beta2 >= 0.0 && p.beta2 <= 1.0)) throw std::invalid_argument("beta2 must lie in [0, 1]");
  if (p.gamma < 1) throw std::invalid_argument("gamma must be >= 1");
}

enum class Status : std::uint8_t { susceptible, infected, recovered };

struct EpidemicState {
  std::vector<Status> status;
  std::vector<std::uint32_t> age;  // steps since infection, meaningful for infected nodes
  std::size_t t = 0;

  static EpidemicState seeded(std::size_t n, std::span<const NodeId> seeds) {
    EpidemicState s;
    s.status.assign(n, Status::susceptible);
    s.age.assign(n, 0);
    for (NodeId v : seeds) {
      if (v >= n) throw std::out_of_range("seed " + std::to_string(v) + " out of range");
      s.status[v] = Status::infected;
    }
    return s;
  }

  std::size_t count(Status x) const {
    return static_cast<std::size_t>(std::count(status.begin(), status.end(), x));
  }
};

/// Synchronous discrete-time SIR on the simplicial contagion model.
///
/// Holds scratch buffers sized to the hypergraph, so one instance per thread.
class SirSimulator {
 public:
  SirSimulator(const HypergraphViews& views, const EpidemicParams& params)
      : views_(views), params_(params), pressure1_(views.num_nodes(), 0), pressure2_(views.num_nodes(), 0) {
    validate(params);
    log_escape1_ = std::log1p(-params.beta1);
    log_escape2_ = std::log1p(-params.beta2);
  }

  /// Advances `state` by one step using coin flips from `rng`.
  void step(EpidemicState& state, Rng& rng) {
    infected_.clear();
    for (NodeId v = 0; v < state.status.size(); ++v)
      if (state.status[v] == Status::infected) infected_.push_back(v);
    step_with(state, rng);
  }

  /// Runs from `state` until no node is infected or `t_max` steps elapsed.
  /// Returns true when absorbed.
  bool run(EpidemicState& state, Rng& rng) {
    const std::size_t t_max = params_.t_max ? params_.t_max : 10 * std::max<std::size_t>(1, state.status.size());
    infected_.clear();
    for (NodeId v = 0; v < state.status.size(); ++v)
      if (state.status[v] == Status::infected) infected_.push_back(v);
    while (!infected_.empty() && state.t < t_max) step_with(state, rng);
    return infected_.empty();
  }

 private:
  void step_with(EpidemicState& state, Rng& rng) {
    auto& st = state.status;
    const auto& adj = views_.adjacency;
    const auto& tri = views_.simplices;
    touched_.clear();

    if (params_.beta1 > 0.0) {
      for (NodeId j : infected_) {
        const auto nb = adj.neighbors(j);
        const auto w = adj.weights(j);
        for (std::size_t p = 0; p < nb.size(); ++p) {
          const NodeId i = nb[p];
          if (st[i] != Status::susceptible) continue;
          if (pressure1_[i] == 0 && pressure2_[i] == 0) touched_.push_back(i);
          pressure1_[i] += w[p];
        }
      }
    }
    if (params_.beta2 > 0.0) {
      // Each (susceptible node, triple) pair is counted from the infected
      // member with the smaller id.
      for (NodeId k : infected_) {
        for (auto t : tri.triples_of(k)) {
          const auto& m = tri.triples[t];
          NodeId x = m[0] == k ? m[1] : m[0];
          NodeId y = m[2] == k ? m[1] : m[2];
          if (st[x] == Status::infected) std::swap(x, y);
          if (st[x] != Status::susceptible || st[y] != Status::infected || y < k) continue;
          if (pressure1_[x] == 0 && pressure2_[x] == 0) touched_.push_back(x);
          pressure2_[x] += tri.weight[t];
        }
      }
    }

    std::sort(touched_.begin(), touched_.end());
    newly_.clear();
    for (NodeId i : touched_) {
      double escape = 1.0;
      if (pressure1_[i]) escape *= std::exp(log_escape1_ * static_cast<double>(pressure1_[i]));
      if (pressure2_[i]) escape *= std::exp(log_escape2_ * static_cast<double>(pressure2_[i]));
      if (rng.uniform() >= escape) newly_.push_back(i);
      pressure1_[i] = 0;
      pressure2_[i] = 0;
    }

    next_.clear();
    for (NodeId v : infected_) {
      if (state.age[v] + 1 >= params_.gamma) {
        st[v] = Status::recovered;
      } else {
        ++state.age[v];
        next_.push_back(v);
      }
    }
    for (NodeId v : newly_) {
      st[v] = Status::infected;
      state.age[v] = 0;
      next_.push_back(v);
    }
    infected_.swap(next_);
    ++state.t;
  }

  const HypergraphViews& views_;
  EpidemicParams params_;
  double log_escape1_ = 0.0;
  double log_escape2_ = 0.0;
  std::vector<std::uint64_t> pressure1_;
  std::vector<std::uint64_t> pressure2_;
  std::vector<NodeId> infected_, next_, newly_, touched_;
};

/// One synchronous step: every susceptible node escapes with probability
/// (1-β₁)^(Σ_{j∈I} A_ij) · (1-β₂)^(Σ_{k<l∈I} B_ikl); infected nodes of age
/// γ-1 recover, the rest age by one.
inline EpidemicState step(const EpidemicState& state, const HypergraphViews& views,
                          const EpidemicParams& params, Rng& rng) {
  EpidemicState next = state;
  SirSimulator sim(views, params);
  sim.step(next, rng);
  return next;
}

struct OutbreakStats {
  std::size_t runs = 0;
  std::size_t reference_size = 0;  // |V_GCC| the fractions refer to
  std::vector<std::size_t> sigma_samples;
  std::vector<std::uint8_t> absorbed;
  std::size_t non_absorbed = 0;
  double sigma_mean = 0.0;
  double sigma_std = 0.0;
  double fraction_of_gcc = 0.0;
};

inline OutbreakStats summarize(std::vector<std::size_t> samples, std::vector<std::uint8_t> absorbed,
                               std::size_t reference_size) {
  OutbreakStats s;
  s.runs = samples.size();
  s.reference_size = reference_size;
  double sum = 0.0;
  for (auto x : samples) sum += static_cast<double>(x);
  s.sigma_mean = s.runs ? sum / static_cast<double>(s.runs) : 0.0;
  double ss = 0.0;
  for (auto x : samples) ss += (static_cast<double>(x) - s.sigma_mean) * (static_cast<double>(x) - s.sigma_mean);
  s.sigma_std = s.runs > 1 ? std::sqrt(ss / static_cast<double>(s.runs - 1)) : 0.0;
  s.fraction_of_gcc = reference_size ? s.sigma_mean / static_cast<double>(reference_size) : 0.0;
  s.non_absorbed = static_cast<std::size_t>(std::count(absorbed.begin(), absorbed.end(), std::uint8_t{0}));
  s.sigma_samples = std::move(samples);
  s.absorbed = std::move(absorbed);
  return s;
}

/// Monte-Carlo estimate of σ(S). Run r uses stream derive_seed(rng_seed, r),
/// so results do not depend on the number of threads.
inline OutbreakStats run_sir(const HypergraphViews& views, std::span<const NodeId> seeds,
                             const EpidemicParams& params, std::size_t runs,
                             std::size_t reference_size = 0, std::size_t threads = 0) {
  validate(params);
  if (runs == 0) throw std::invalid_argument("run_sir: runs must be >= 1");
  const std::size_t n = views.num_nodes();
  for (NodeId v : seeds)
    if (v >= n) throw std::out_of_range("run_sir: seed " + std::to_string(v) + " out of range");

  std::vector<std::size_t> sigma(runs, 0);
  std::vector<std::uint8_t> absorbed(runs, 0);
  const std::size_t workers = std::min(threads ? threads : default_threads(), runs);
  const std::size_t chunk = (runs + workers - 1) / workers;
  parallel_for(
      workers,
      [&](std::size_t w) {
        SirSimulator sim(views, params);
        for (std::size_t r = w * chunk; r < std::min(runs, (w + 1) * chunk); ++r) {
          Rng rng(derive_seed(params.rng_seed, r));
          auto state = EpidemicState::seeded(n, seeds);
          absorbed[r] = sim.run(state, rng) ? 1 : 0;
          sigma[r] = state.count(Status::recovered) + state.count(Status::infected);
        }
      },
      workers);
  return summarize(std::move(sigma), std::move(absorbed), reference_size ? reference_size : n);
}

/// Like run_sir, but every run starts from `k` distinct nodes drawn uniformly
/// at random from that run's own stream.
inline OutbreakStats run_sir_random_seeds(const HypergraphViews& views, std::size_t k, const EpidemicParams& params,
                                          std::size_t runs, std::size_t reference_size = 0,
                                          std::size_t threads = 0) {
  validate(params);
  if (runs == 0) throw std::invalid_argument("run_sir_random_seeds: runs must be >= 1");
  const std::size_t n = views.num_nodes();
  if (k == 0 || k > n) throw std::invalid_argument("run_sir_random_seeds: k must lie in [1, N]");
  std::vector<std::size_t> sigma(runs, 0);
  std::vector<std::uint8_t> absorbed(runs, 0);
  const std::size_t workers = std::min(threads ? threads : default_threads(), runs);
  const std::size_t chunk = (runs + workers - 1) / workers;
  parallel_for(
      workers,
      [&](std::size_t w) {
        SirSimulator sim(views, params);
        for (std::size_t r = w * chunk; r < std::min(runs, (w + 1) * chunk); ++r) {
          Rng rng(derive_seed(params.rng_seed, r));
          std::vector<NodeId> seeds;
          while (seeds.size() < k) {
            const auto v = static_cast<NodeId>(rng.below(n));
            if (std::find(seeds.begin(), seeds.end(), v) == seeds.end()) seeds.push_back(v);
          }
          auto state = EpidemicState::seeded(n, seeds);
          absorbed[r] = sim.run(state, rng) ? 1 : 0;
          sigma[r] = state.count(Status::recovered) + state.count(Status::infected);
        }
      },
      workers);
  return summarize(std::move(sigma), std::move(absorbed), reference_size ? reference_size : n);
}

struct RescaledBetas {
  double beta1 = 0.0;
  double beta2 = 0.0;
  bool clamped = false;
};

/// β₁ = λ₁μ/⟨k1⟩ and β₂ = λ₂μ/⟨k2⟩ with μ = 1/γ, clamped to [0, 1].
inline RescaledBetas rescale_params(double lambda1, double lambda2, const SimplexDensities& densities,
                                    std::uint32_t gamma) {
  if (gamma < 1) throw std::invalid_argument("rescale_params: gamma must be >= 1");
  if (lambda1 < 0.0 || lambda2 < 0.0) throw std::invalid_argument("rescale_params: negative lambda");
  const double mu = 1.0 / gamma;
  RescaledBetas out;
  if (lambda1 > 0.0) {
    if (!(densities.k1_mean > 0.0)) throw std::invalid_argument("rescale_params: <k1> = 0, no 1-simplices");
    out.beta1 = lambda1 * mu / densities.k1_mean;
  }
  if (lambda2 > 0.0) {
    if (!(densities.k2_mean > 0.0)) {
      throw std::invalid_argument("rescale_params: <k2> = 0 but lambda2 > 0; no 2-simplices to carry it");
    }
    out.beta2 = lambda2 * mu / densities.k2_mean;
  }
  if (out.beta1 > 1.0 || out.beta2 > 1.0) out.clamped = true;
  out.beta1 = std::min(out.beta1, 1.0);
  out.beta2 = std::min(out.beta2, 1.0);
  return out;
}

struct BistableSplit {
  double absorbing = 0.0;
  double endemic = 0.0;
};

/// A run is absorbing when its final outbreak covers less than
/// `threshold_fraction` of the reference size.
inline BistableSplit classify_bistable(const OutbreakStats& stats, double threshold_fraction = 0.05) {
  if (stats.runs == 0) throw std::invalid_argument("classify_bistable: no runs");
  std::size_t absorbing = 0;
  const double ref = static_cast<double>(stats.reference_size);
  for (auto s : stats.sigma_samples)
    if (static_cast<double>(s) < threshold_fraction * ref) ++absorbing;
  BistableSplit out;
  out.absorbing = static_cast<double>(absorbing) / static_cast<double>(stats.runs);
  out.endemic = 1.0 - out.absorbing;
  return out;
}

}  // namespace hyperim
