#include <gtest/gtest.h>

#include <cmath>

#include "hyperim/dynamics.hpp"
#include "properties.hpp"
#include "test_util.hpp"

using namespace hyperim;
using namespace hyperim::testing;

namespace {

EpidemicParams params(double b1, double b2, std::uint32_t gamma = 1, std::uint64_t seed = 1) {
  EpidemicParams p;
  p.beta1 = b1;
  p.beta2 = b2;
  p.gamma = gamma;
  p.rng_seed = seed;
  return p;
}

}  // namespace

TEST(Params, Validation) {
  EXPECT_THROW(validate(params(1.2, 0)), std::invalid_argument);
  EXPECT_THROW(validate(params(0.1, -0.1)), std::invalid_argument);
  EXPECT_THROW(validate(params(0.1, 0.1, 0)), std::invalid_argument);
}

TEST(Step, ZeroInfectivityOnlyRecovers) {
  const HypergraphViews v(Hypergraph(4, {{0, 1, 2}, {2, 3}}));
  const NodeId seeds[] = {0, 3};
  auto st = EpidemicState::seeded(4, seeds);
  Rng rng(1);
  const auto p = params(0, 0, 3);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(st.count(Status::infected), 2u);
    st = step(st, v, p, rng);
  }
  EXPECT_EQ(st.count(Status::recovered), 2u);
  EXPECT_EQ(st.count(Status::susceptible), 2u);
}

TEST(Step, CertainInfectionAdvancesOneHopPerStep) {
  const HypergraphViews v(path(6));
  const NodeId seeds[] = {0};
  auto st = EpidemicState::seeded(6, seeds);
  Rng rng(3);
  const auto p = params(1, 0);
  for (NodeId t = 1; t < 6; ++t) {
    st = step(st, v, p, rng);
    for (NodeId u = 0; u < 6; ++u) {
      const Status want = u < t ? Status::recovered : (u == t ? Status::infected : Status::susceptible);
      EXPECT_EQ(st.status[u], want) << "t=" << t << " node " << u;
    }
  }
  const auto stats = run_sir(v, seeds, p, 10);
  EXPECT_EQ(stats.sigma_mean, 6.0);
}

TEST(Step, TriangleNeedsTwoInfectedMembers) {
  const HypergraphViews v(Hypergraph(3, {{0, 1, 2}}));
  const NodeId seeds[] = {0};
  const auto exact = exact_sir(v.hypergraph, seeds, 0.0, 1.0, 1);
  ASSERT_EQ(exact.final_size.size(), 1u);
  EXPECT_EQ(exact.final_size.begin()->first, 1u);
  const auto stats = run_sir(v, seeds, params(0, 1), 200);
  EXPECT_EQ(stats.sigma_mean, 1.0);

  // With two seeds the triangle fires for sure.
  const NodeId two[] = {0, 1};
  EXPECT_EQ(run_sir(v, two, params(0, 1), 50).sigma_mean, 3.0);
}

TEST(Step, EscapeUsesWeightExponents) {
  // Node 1 shares two hyperedges with the seed: escape probability (1-b)^2.
  const HypergraphViews v(Hypergraph(2, {{0, 1}, {0, 1}}));
  const NodeId seeds[] = {0};
  const double b = 0.3;
  const auto stats = run_sir(v, seeds, params(b, 0, 1, 5), 40000);
  const double p = 1.0 - (1.0 - b) * (1.0 - b);
  EXPECT_NEAR(stats.sigma_mean, 1.0 + p, 3.0 * std::sqrt(p * (1 - p) / 40000.0));
}

TEST(RunSir, ZeroInfectivityGivesSeedCount) {
  Rng rng(2);
  const HypergraphViews v(random_hypergraph(rng, 30, 20));
  const NodeId seeds[] = {1, 4, 9, 16};
  const auto s = run_sir(v, seeds, params(0, 0, 2), 25);
  EXPECT_EQ(s.sigma_mean, 4.0);
  EXPECT_EQ(s.sigma_std, 0.0);
  EXPECT_EQ(s.non_absorbed, 0u);
}

TEST(RunSir, SingleLinkMeanIsOnePlusP) {
  const HypergraphViews v(path(2));
  const NodeId seeds[] = {0};
  const double p = 0.35;
  const std::size_t runs = 20000;
  const auto s = run_sir(v, seeds, params(p, 0, 1, 11), runs);
  EXPECT_NEAR(s.sigma_mean, 1.0 + p, 3.0 * std::sqrt(p * (1.0 - p) / double(runs)));
}

TEST(RunSir, StepCapFlagsNonAbsorbedRuns) {
  const HypergraphViews v(path(10));
  const NodeId seeds[] = {0};
  auto p = params(1, 0);
  p.t_max = 3;
  const auto s = run_sir(v, seeds, p, 5);
  EXPECT_EQ(s.non_absorbed, 5u);
  EXPECT_EQ(s.sigma_mean, 4.0);  // three recovered plus the current front
}

TEST(RunSir, RejectsBadSeedsAndRuns) {
  const HypergraphViews v(path(3));
  const NodeId bad[] = {7};
  EXPECT_THROW(run_sir(v, bad, params(0.1, 0), 5), std::out_of_range);
  const NodeId ok[] = {0};
  EXPECT_THROW(run_sir(v, ok, params(0.1, 0), 0), std::invalid_argument);
}

TEST(RunSir, MatchesExactEnumerationOnSmallInstances) {
  Rng rng(21);
  for (int t = 0; t < 12; ++t) {
    const auto h = random_hypergraph(rng, 4, 1 + rng.below(3), 2, 4);
    const HypergraphViews v(h);
    const NodeId seeds[] = {0};
    const auto p = params(0.4, 0.7, 1 + t % 2, 100 + t);
    const auto exact = exact_sir(h, seeds, p.beta1, p.beta2, p.gamma);
    const std::size_t runs = 20000;
    const auto mc = run_sir(v, seeds, p, runs);
    std::map<std::size_t, double> freq;
    for (auto s : mc.sigma_samples) freq[s] += 1.0 / double(runs);
    for (auto [size, prob] : exact.final_size) {
      const double sd = std::sqrt(prob * (1 - prob) / double(runs));
      EXPECT_NEAR(freq[size], prob, 3.0 * sd + 1e-12) << "instance " << t << " size " << size;
    }
    for (auto [size, f] : freq) EXPECT_TRUE(exact.final_size.count(size)) << "impossible size " << size;
  }
}

TEST(RunSir, RandomSeedPerRun) {
  const HypergraphViews v(path(5));
  const auto s = run_sir_random_seeds(v, 1, params(0, 0), 200);
  EXPECT_EQ(s.sigma_mean, 1.0);
  const auto two = run_sir_random_seeds(v, 2, params(0, 0), 50);
  EXPECT_EQ(two.sigma_mean, 2.0);
  EXPECT_THROW(run_sir_random_seeds(v, 6, params(0, 0), 5), std::invalid_argument);
  const auto a = run_sir_random_seeds(v, 1, params(0.5, 0), 100, 0, 1);
  const auto b = run_sir_random_seeds(v, 1, params(0.5, 0), 100, 0, 4);
  EXPECT_EQ(a.sigma_samples, b.sigma_samples);
}

TEST(Properties, Conservation) {
  Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    const HypergraphViews v(random_hypergraph(rng, 10 + rng.below(40), 5 + rng.below(40), 2, 5));
    const NodeId seeds[] = {0, 1};
    const auto p = params(0.3, 0.5, 1 + t % 3);
    EXPECT_EQ(check_conservation(v, p, seeds, 1000 + t), "") << "instance " << t;
  }
}

TEST(Properties, MonotoneInInfectivities) {
  Rng rng(32);
  for (int t = 0; t < 8; ++t) {
    const HypergraphViews v(random_hypergraph(rng, 60, 50, 2, 4));
    const NodeId seeds[] = {0};
    EXPECT_EQ(check_monotone(v, seeds, params(0.1, 0.2), params(0.2, 0.2), 400), "");
    EXPECT_EQ(check_monotone(v, seeds, params(0.15, 0.1), params(0.15, 0.6), 400), "");
  }
}

TEST(Properties, Determinism) {
  Rng rng(33);
  const HypergraphViews v(random_hypergraph(rng, 80, 60, 2, 5));
  const NodeId seeds[] = {0, 5};
  EXPECT_EQ(check_sir_determinism(v, seeds, params(0.2, 0.3, 2, 4)), "");
}

TEST(Properties, HigherOrderPressureNeverHurts) {
  Rng rng(34);
  const HypergraphViews v(random_hypergraph(rng, 200, 150, 3, 4));
  const auto d = simplex_densities(v.adjacency, v.simplices);
  const NodeId seeds[] = {0, 1, 2};
  const auto lo = rescale_params(1.0, 0.0, d, 1);
  const auto hi = rescale_params(1.0, 0.8, d, 1);
  EXPECT_EQ(check_monotone(v, seeds, params(lo.beta1, lo.beta2), params(hi.beta1, hi.beta2), 400), "");
}

TEST(Rescale, Examples) {
  SimplexDensities d{2.0, 4.0};
  auto b = rescale_params(1.0, 0.0, d, 1);
  EXPECT_DOUBLE_EQ(b.beta1, 0.5);
  EXPECT_EQ(b.beta2, 0.0);
  EXPECT_FALSE(b.clamped);

  b = rescale_params(1.1, 0.0, SimplexDensities{239.07, 0.0}, 1);
  EXPECT_NEAR(b.beta1, 0.0046, 5e-5);

  b = rescale_params(1.0, 2.0, d, 2);
  EXPECT_DOUBLE_EQ(b.beta1, 0.25);
  EXPECT_DOUBLE_EQ(b.beta2, 0.25);

  b = rescale_params(5.0, 0.0, d, 1);
  EXPECT_TRUE(b.clamped);
  EXPECT_EQ(b.beta1, 1.0);

  EXPECT_THROW(rescale_params(1.0, 0.5, SimplexDensities{2.0, 0.0}, 1), std::invalid_argument);
  EXPECT_THROW(rescale_params(1.0, 0.0, SimplexDensities{0.0, 0.0}, 1), std::invalid_argument);
}

TEST(Bistable, Classification) {
  const HypergraphViews star(Hypergraph(50, {}));
  const NodeId seed[] = {0};
  auto s = run_sir(star, seed, params(0.5, 0), 20);
  auto c = classify_bistable(s);
  EXPECT_EQ(c.absorbing, 1.0);
  EXPECT_EQ(c.endemic, 0.0);

  const HypergraphViews p(path(30));
  s = run_sir(p, seed, params(1, 0), 20);
  c = classify_bistable(s);
  EXPECT_EQ(c.absorbing, 0.0);
  EXPECT_EQ(c.endemic, 1.0);

  OutbreakStats none;
  EXPECT_THROW(classify_bistable(none), std::invalid_argument);
}
