#include <cmath>

#include <gtest/gtest.h>

#include "gbl/bobw.hpp"
#include "gbl/bounds.hpp"

namespace gbl {
namespace {

TEST(MartingaleBound, Examples) {
  const double delta = std::exp(-1.0);
  EXPECT_NEAR(martingale_bound(1.0, 1.0, 1, delta), 3.0, 1e-12);
  const double l = std::log(200 / 0.05);
  EXPECT_NEAR(martingale_bound(0.0, 0.7, 200, 0.05), std::sqrt(5.0) * 0.7 * l, 1e-12);
  EXPECT_NEAR(martingale_bound(0.0, 1.4, 200, 0.05), 2.0 * martingale_bound(0.0, 0.7, 200, 0.05), 1e-12);
  EXPECT_NEAR(martingale_bound(3.0, 2.0, 50, 0.1),
              std::sqrt(12.0 * std::log(500.0) + 20.0 * std::log(500.0) * std::log(500.0)), 1e-12);
}

TEST(MartingaleBound, MonotoneInEveryArgument) {
  EXPECT_LT(martingale_bound(1.0, 1.0, 100, 0.1), martingale_bound(2.0, 1.0, 100, 0.1));
  EXPECT_LT(martingale_bound(1.0, 1.0, 100, 0.1), martingale_bound(1.0, 2.0, 100, 0.1));
  EXPECT_LT(martingale_bound(1.0, 1.0, 100, 0.1), martingale_bound(1.0, 1.0, 200, 0.1));
  EXPECT_LT(martingale_bound(1.0, 1.0, 100, 0.1), martingale_bound(1.0, 1.0, 100, 0.05));
}

TEST(PullCountBound, NonDominatingArm) {
  const auto gamma = [](std::int64_t) { return 0.3; };
  const double l = std::log(1000 / 0.05);
  EXPECT_NEAR(pull_count_bound(40, 0, gamma, 1000, 0.05), 40 + std::sqrt(4 * 40 * l + 5 * l * l), 1e-10);
  EXPECT_NEAR(pull_count_bound(0, 0, gamma, 1000, 0.05), std::sqrt(5.0) * l, 1e-10);
}

TEST(PullCountBound, HarmonicTailWithConstantGamma) {
  const auto gamma = [](std::int64_t) { return 1.0; };
  double harmonic = 0.0;
  for (int s = 10; s <= 100; ++s) harmonic += 1.0 / s;
  const double m = 25 + 10 + 10 * harmonic;
  const double l = std::log(100 / 0.05);
  EXPECT_NEAR(10 * harmonic, 23.58, 0.01);
  EXPECT_NEAR(pull_count_bound(25, 10, gamma, 100, 0.05), m + std::sqrt(4 * m * l + 5 * l * l), 1e-10);
}

TEST(PullCountBound, UsesTheSuppliedSchedule) {
  const auto gamma = [](std::int64_t t) { return gamma_schedule(t, 5, 2); };
  double head = 0.0;
  double tail = 0.0;
  for (int s = 1; s <= 300; ++s) head += gamma(s);
  for (int s = 300; s <= 5000; ++s) tail += gamma(s) / s;
  const double m = 700 + head + 300 * tail;
  const double l = std::log(5000 / 0.01);
  EXPECT_NEAR(pull_count_bound(700, 300, gamma, 5000, 0.01), m + std::sqrt(4 * m * l + 5 * l * l), 1e-9);
}

}  // namespace
}  // namespace gbl
