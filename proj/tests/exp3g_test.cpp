#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gbl/environment.hpp"
#include "gbl/errors.hpp"
#include "gbl/exp3g.hpp"
#include "gbl/policy.hpp"

namespace gbl {
namespace {

TEST(Exp3gInit, Parameters) {
  const auto g = make_graph(GraphFamily::bar, 6);
  const auto d = greedy_dominating_set(g);
  const auto s = exp3g_init(g, d, 100000);
  const double k = 6.0;
  const double dsz = static_cast<double>(d.size());
  const double gamma = std::min(0.5, std::cbrt(k * dsz * std::log(k) / 100000.0));
  EXPECT_DOUBLE_EQ(s.gamma, gamma);
  EXPECT_DOUBLE_EQ(s.eta, std::min(std::sqrt(gamma * std::log(k) / (100000.0 * k * dsz)), gamma / dsz));
  EXPECT_EQ(s.log_weights, std::vector<double>(6, 0.0));
  EXPECT_EQ(s.round, 0);
  EXPECT_EQ(s.horizon, 100000);
}

TEST(Exp3gInit, GammaShrinksWithHorizon) {
  const auto g = make_graph(GraphFamily::loopless_cycle, 5);
  const auto d = greedy_dominating_set(g);
  EXPECT_EQ(exp3g_init(g, d, 1).gamma, 0.5);
  double prev = 1.0;
  for (std::int64_t h = 10; h <= 10000000000LL; h *= 10) {
    const double gamma = exp3g_init(g, d, h).gamma;
    EXPECT_LE(gamma, prev);
    prev = gamma;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(Exp3gInit, Errors) {
  const auto g = make_graph(GraphFamily::clique_loops, 3);
  const auto d = greedy_dominating_set(g);
  EXPECT_THROW(exp3g_init(g, d, 0), InputError);
  EXPECT_THROW(exp3g_init_with(g, d, 10, 0.6, 0.1), InputError);
  EXPECT_THROW(exp3g_init_with(g, d, 10, 0.2, 0.3), InputError);
}

TEST(Exp3gDistribution, InitialMixture) {
  const auto g = make_graph(GraphFamily::clique_loops, 2);
  const auto s = exp3g_init_with(g, DominatingSet(g, {1}), 100, 0.5, 0.01);
  const auto d = exp3g_distribution(s);
  EXPECT_DOUBLE_EQ(d.probs[0], 0.75);
  EXPECT_DOUBLE_EQ(d.probs[1], 0.25);

  const auto bar = make_graph(GraphFamily::bar, 4);
  const auto dom = greedy_dominating_set(bar);
  const auto sb = exp3g_init(bar, dom, 500);
  const auto db = exp3g_distribution(sb);
  for (Arm i = 1; i <= 4; ++i) {
    const double explore = dom.contains(i) ? 1.0 / static_cast<double>(dom.size()) : 0.0;
    EXPECT_NEAR(db.prob(i), (1 - sb.gamma) / 4.0 + sb.gamma * explore, 1e-15);
  }
}

TEST(Exp3gDistribution, PureSoftmaxAndLargeWeights) {
  const auto g = make_graph(GraphFamily::clique_loops, 3);
  auto s = exp3g_init_with(g, DominatingSet(g, {2}), 100, 0.0, 0.01);
  s.log_weights = {0.0, std::log(2.0), std::log(5.0)};
  auto d = exp3g_distribution(s);
  EXPECT_NEAR(d.probs[0], 0.125, 1e-15);
  EXPECT_NEAR(d.probs[1], 0.25, 1e-15);
  EXPECT_NEAR(d.probs[2], 0.625, 1e-15);

  s = exp3g_init_with(g, DominatingSet(g, {2}), 100, 0.2, 0.01);
  s.log_weights = {0.0, 50.0, 0.0};
  d = exp3g_distribution(s);
  EXPECT_NEAR(d.probs[1], 1.0, 1e-15);
  // far beyond exp overflow, max-subtraction keeps it finite
  s.log_weights = {1000.0, 2000.0, 0.0};
  d = exp3g_distribution(s);
  EXPECT_NEAR(d.probs[1], 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(d.probs[0]));
}

TEST(Exp3gUpdate, Examples) {
  const auto clique = make_graph(GraphFamily::clique_loops, 3);
  auto s = exp3g_init_with(clique, DominatingSet(clique, {1}), 100, 0.3, 0.05);
  s.log_weights = {0, 0, 0};
  ActionDistribution uniform;
  uniform.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  exp3g_update(s, clique, make_observation(clique, 2, std::vector<double>{0.2, 0.4, 0.6}), uniform);
  EXPECT_NEAR(s.log_weights[0], 0.05 * 0.2, 1e-15);
  EXPECT_NEAR(s.log_weights[2], 0.05 * 0.6, 1e-15);
  EXPECT_EQ(s.round, 1);

  // 2 is seen only from 1; 3 is seen only from 2
  const FeedbackGraph g(3, {{1, 2}, {2, 3}, {3, 1}, {1, 1}});
  auto t = exp3g_init_with(g, DominatingSet(g, {1, 2, 3}), 100, 0.3, 0.1);
  ActionDistribution d;
  d.probs = {0.1, 0.45, 0.45};
  exp3g_update(t, g, make_observation(g, 1, std::vector<double>{0.0, 1.0, 1.0}), d);
  EXPECT_NEAR(t.log_weights[1], 10 * 0.1, 1e-12);
  EXPECT_EQ(t.log_weights[2], 0.0);

  d.probs = {0.0, 0.0, 1.0};
  EXPECT_THROW(exp3g_update(t, g, make_observation(g, 1, std::vector<double>{0.0, 1.0, 1.0}), d), InternalError);
}

TEST(Exp3gProperty, OneRoundUnbiasedByEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 2; k <= 6; ++k) {
    for (std::uint64_t gs = 0; gs < 10; ++gs) {
      const auto g = make_graph(GraphFamily::random_observable, k, 0.3, 100 + gs);
      const auto dom = greedy_dominating_set(g);
      auto base = exp3g_init(g, dom, 1000);
      for (double& w : base.log_weights) w = 3.0 * unit(rng);
      const auto dist = exp3g_distribution(base);
      std::vector<double> r(static_cast<std::size_t>(k));
      for (double& v : r) v = unit(rng);
      std::vector<double> expectation(static_cast<std::size_t>(k), 0.0);
      for (Arm chosen = 1; chosen <= k; ++chosen) {
        auto s = base;
        exp3g_update(s, g, make_observation(g, chosen, r), dist);
        for (std::size_t i = 0; i < expectation.size(); ++i) {
          expectation[i] += dist.probs[static_cast<std::size_t>(chosen - 1)] * (s.log_weights[i] - base.log_weights[i]) / s.eta;
        }
      }
      for (std::size_t i = 0; i < expectation.size(); ++i) EXPECT_NEAR(expectation[i], r[i], 1e-10);
    }
  }
}

TEST(Exp3gProperty, BoundedUpdateAndExplorationFloor) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int k = 3 + static_cast<int>(seed % 6);
    const auto g = make_graph(GraphFamily::random_observable, k, 0.2, seed);
    const auto dom = greedy_dominating_set(g);
    const auto horizon = static_cast<std::int64_t>(50 + 400 * (seed % 4));
    Exp3gPolicy policy(g, dom, horizon);
    CounterRng sampling = make_rng(seed).substream("policy");
    const Environment env = AdversarialEnv::drift(std::vector<double>(static_cast<std::size_t>(k), 0.5), 37, 0.4, seed);
    CounterRng unused = make_rng(seed);
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const auto before = policy.state();
      const auto dist = policy.distribution();
      for (Arm j : dom.members()) ASSERT_GE(dist.prob(j), before.gamma / double(dom.size()) * (1 - 1e-12));
      ASSERT_NEAR(std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0), 1.0, 1e-12);
      const auto r = reward_vector(env, t, unused);
      policy.observe(make_observation(g, sample_arm(dist.probs, sampling.uniform()), r));
      for (std::size_t i = 0; i < before.log_weights.size(); ++i) {
        ASSERT_LE(policy.state().log_weights[i] - before.log_weights[i], 1.0 + 1e-12);
        ASSERT_TRUE(std::isfinite(policy.state().log_weights[i]));
      }
    }
    EXPECT_EQ(policy.state().round, horizon);
  }
}

}  // namespace
}  // namespace gbl
