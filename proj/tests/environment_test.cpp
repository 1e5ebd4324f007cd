#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "gbl/environment.hpp"
#include "gbl/errors.hpp"

namespace gbl {
namespace {

RewardTable small_table() {
  RewardTable t;
  t.rows = 3;
  t.cols = 2;
  t.values = {0.1, 0.9, 0.25, 0.5, 1.0, 0.0};
  return t;
}

TEST(StochasticEnv, Validation) {
  EXPECT_THROW(StochasticEnv::make({0.5}), InputError);
  EXPECT_THROW(StochasticEnv::make({0.5, 1.2}), InputError);
  EXPECT_THROW(StochasticEnv::make({0.5, -0.1}), InputError);
  EXPECT_THROW(StochasticEnv::make({0.7, 0.2, 0.7}), InputError);
  EXPECT_THROW(StochasticEnv::make({0.7, 0.2}, RewardLaw::uniform_pm, -0.1), InputError);
  const auto zero_gap = StochasticEnv::make({0.4, 0.4, 0.4});
  EXPECT_EQ(zero_gap.best_arm(), 1);
  EXPECT_EQ(zero_gap.gap(3), 0.0);
  const auto e = StochasticEnv::make({0.2, 0.9, 0.5});
  EXPECT_EQ(e.best_arm(), 2);
  EXPECT_DOUBLE_EQ(e.gap(1), 0.7);
}

TEST(RewardVector, DegenerateBernoulli) {
  const Environment env = StochasticEnv::make({1.0, 0.0, 0.0});
  CounterRng rng = make_rng(3).substream("rewards");
  for (int t = 1; t <= 1000; ++t) {
    const auto r = reward_vector(env, t, rng);
    ASSERT_EQ(r[0], 1.0);
    ASSERT_EQ(r[1], 0.0);
  }
}

TEST(RewardVector, BernoulliEmpiricalMean) {
  const Environment env = StochasticEnv::make({0.3, 0.8});
  CounterRng rng = make_rng(4).substream("rewards");
  double sum = 0.0;
  const int n = 40000;
  for (int t = 1; t <= n; ++t) sum += reward_vector(env, t, rng)[0];
  EXPECT_NEAR(sum / n, 0.3, 5 * std::sqrt(0.21 / n));
}

TEST(RewardVector, UniformLawStaysInRangeAndBand) {
  const Environment env = StochasticEnv::make({0.05, 0.6}, RewardLaw::uniform_pm, 0.2);
  CounterRng rng = make_rng(8).substream("rewards");
  for (int t = 1; t <= 5000; ++t) {
    const auto r = reward_vector(env, t, rng);
    ASSERT_GE(r[0], 0.0);
    ASSERT_LE(r[0], 0.25);
    ASSERT_GE(r[1], 0.4);
    ASSERT_LE(r[1], 0.8);
  }
}

TEST(RewardVector, TableRowsVerbatim) {
  const Environment env = AdversarialEnv::from_table(small_table());
  CounterRng rng;
  EXPECT_EQ(reward_vector(env, 2, rng), (std::vector<double>{0.25, 0.5}));
  EXPECT_EQ(reward_vector(env, 3, rng), (std::vector<double>{1.0, 0.0}));
  EXPECT_THROW(reward_vector(env, 4, rng), InputError);
  EXPECT_THROW(reward_vector(env, 0, rng), InputError);
  EXPECT_EQ(rng, CounterRng{});
}

TEST(MeanSwitch, RotatesOncePerPeriod) {
  const auto env = AdversarialEnv::mean_switch({0.9, 0.5, 0.1}, 4, 7);
  EXPECT_EQ(env.means_at(1), (std::vector<double>{0.9, 0.5, 0.1}));
  EXPECT_EQ(env.means_at(4), (std::vector<double>{0.9, 0.5, 0.1}));
  EXPECT_EQ(env.means_at(5), (std::vector<double>{0.1, 0.9, 0.5}));
  EXPECT_EQ(env.means_at(9), (std::vector<double>{0.5, 0.1, 0.9}));
  EXPECT_EQ(env.means_at(13), env.means_at(1));
  EXPECT_THROW(AdversarialEnv::mean_switch({0.9, 0.5}, 0, 1), InputError);
}

TEST(MeanSwitch, DeterministicRewardsFollowTheMeans) {
  const Environment env = AdversarialEnv::mean_switch({1.0, 0.0}, 3, 11);
  CounterRng rng;
  for (int t = 1; t <= 12; ++t) {
    const bool first_phase = ((t - 1) / 3) % 2 == 0;
    EXPECT_EQ(reward_vector(env, t, rng), (first_phase ? std::vector<double>{1, 0} : std::vector<double>{0, 1}));
  }
}

TEST(Drift, MeansFollowTheSinusoid) {
  const auto env = AdversarialEnv::drift({0.5, 0.5}, 8, 0.25, 2);
  const auto m = env.means_at(2);  // phase 1/4
  EXPECT_NEAR(m[0], 0.75, 1e-12);
  EXPECT_NEAR(m[1], 0.25, 1e-12);
  const auto clipped = AdversarialEnv::drift({0.9, 0.1}, 8, 0.5, 2).means_at(2);
  EXPECT_EQ(clipped[0], 1.0);
  EXPECT_EQ(clipped[1], 0.0);
}

TEST(BestFixedArm, Examples) {
  const auto best = best_fixed_arm(StochasticEnv::make({0.9, 0.5}), 100);
  EXPECT_EQ(best.arm, 1);
  EXPECT_DOUBLE_EQ(best.cumulative, 90.0);

  RewardTable t;
  t.rows = 3;
  t.cols = 3;
  t.values = {0.1, 0.2, 0.0, 0.3, 0.9, 0.1, 0.0, 0.4, 0.2};
  const auto adv = best_fixed_arm(AdversarialEnv::from_table(t), 3);
  EXPECT_EQ(adv.arm, 2);
  EXPECT_DOUBLE_EQ(adv.cumulative, 1.5);
}

TEST(BestFixedArm, TiesGoToSmallestIndex) {
  RewardTable t;
  t.rows = 2;
  t.cols = 3;
  t.values = {0.0, 1.0, 0.5, 0.0, 0.0, 0.5};
  EXPECT_EQ(best_fixed_arm(AdversarialEnv::from_table(t), 2).arm, 2);
}

TEST(BestFixedArm, SwitchingBaselineBeatsEveryPhase) {
  // base (1, 0), period 3, T = 4: arm 1 earns 3, arm 2 earns 1
  const Environment env = AdversarialEnv::mean_switch({1.0, 0.0}, 3, 1);
  const auto best = best_fixed_arm(env, 4);
  EXPECT_EQ(best.arm, 1);
  EXPECT_DOUBLE_EQ(best.cumulative, 3.0);
  EXPECT_GT(best.cumulative, 0.5 * 4);
}

TEST(AdversarialProperty, ObliviousMaterializeMatchesStream) {
  const std::vector<AdversarialEnv> envs = {
      AdversarialEnv::mean_switch({0.8, 0.4, 0.3, 0.2}, 50, 21),
      AdversarialEnv::drift({0.5, 0.6, 0.3}, 70, 0.3, 22),
      AdversarialEnv::from_table(small_table()),
  };
  for (const auto& a : envs) {
    const std::int64_t n = a.generator == AdversarialGenerator::table ? 3 : 500;
    const RewardTable full = materialize(a, n);
    const Environment env = a;
    // reverse order, with a live rng that must be ignored
    CounterRng rng = make_rng(99);
    for (std::int64_t t = n; t >= 1; --t) {
      const auto row = reward_vector(env, t, rng);
      for (Arm i = 1; i <= a.num_arms(); ++i) ASSERT_EQ(row[static_cast<std::size_t>(i - 1)], full.at(t, i));
    }
    EXPECT_EQ(rng, make_rng(99));
  }
}

TEST(AdversarialProperty, DeterministicPerSeedAndSeedSensitive) {
  const auto a = AdversarialEnv::drift({0.5, 0.5, 0.5}, 40, 0.3, 5);
  const auto b = AdversarialEnv::drift({0.5, 0.5, 0.5}, 40, 0.3, 5);
  const auto c = AdversarialEnv::drift({0.5, 0.5, 0.5}, 40, 0.3, 6);
  EXPECT_EQ(materialize(a, 300), materialize(b, 300));
  EXPECT_NE(materialize(a, 300), materialize(c, 300));
}

TEST(StochasticProperty, DeterministicStream) {
  const Environment env = StochasticEnv::make({0.3, 0.6, 0.2}, RewardLaw::uniform_pm, 0.3);
  CounterRng r1 = make_rng(12).substream("rewards");
  CounterRng r2 = make_rng(12).substream("rewards");
  for (int t = 1; t <= 200; ++t) ASSERT_EQ(reward_vector(env, t, r1), reward_vector(env, t, r2));
}

TEST(RewardProperty, AllEmittedRewardsInUnitInterval) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::vector<Environment> envs = {
        StochasticEnv::make({0.0, 1.0, 0.95}, RewardLaw::uniform_pm, 0.5),
        AdversarialEnv::drift({0.0, 1.0, 0.5}, 13, 1.0, seed),
        AdversarialEnv::mean_switch({0.0, 1.0, 0.3}, 7, seed),
    };
    for (const auto& env : envs) {
      CounterRng rng = make_rng(seed).substream("rewards");
      for (int t = 1; t <= 300; ++t) {
        for (double v : reward_vector(env, t, rng)) {
          ASSERT_GE(v, 0.0);
          ASSERT_LE(v, 1.0);
        }
      }
    }
  }
}

TEST(TableCsv, RoundTrip) {
  const auto t = small_table();
  EXPECT_EQ(parse_table_csv(table_to_csv(t)), t);
  const auto generated = materialize(AdversarialEnv::drift({0.3, 0.6}, 9, 0.2, 3), 40);
  EXPECT_EQ(parse_table_csv(table_to_csv(generated)), generated);
  const auto path = std::filesystem::temp_directory_path() / "gbl_env_table_test.csv";
  write_table_csv(t, path);
  EXPECT_EQ(load_table_csv(path), t);
  std::filesystem::remove(path);
}

TEST(TableCsv, ParsesTolerantWhitespace) {
  const auto t = parse_table_csv("0.5, 1\r\n0,0.25\n\n");
  EXPECT_EQ(t.rows, 2);
  EXPECT_EQ(t.values, (std::vector<double>{0.5, 1.0, 0.0, 0.25}));
}

TEST(TableCsv, ErrorsNameTheLine) {
  auto message = [](std::string_view text) {
    try {
      parse_table_csv(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("0.1,0.2\n0.3,x\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("0.1,0.2\n0.3,1.5\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("0.1,0.2\n0.3,0.4,0.5\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("").find("empty"), std::string::npos);
  EXPECT_THROW(load_table_csv("/nonexistent/table.csv"), InputError);
}

}  // namespace
}  // namespace gbl
