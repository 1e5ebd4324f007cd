#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "gbl/graph.hpp"

namespace gbl {

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + compensation; }

  friend bool operator==(const CompensatedSum&, const CompensatedSum&) = default;
};

// Per-round sampling distribution over arms, indexed by arm - 1.
// probs = (1 - gamma) * exploit_part + gamma * explore_part, plus any
// exploration mass that had nowhere to go (folded back onto exploit_part).
struct ActionDistribution {
  std::vector<double> probs;
  std::vector<double> exploit_part;
  std::vector<double> explore_part;
  double gamma = 0.0;

  [[nodiscard]] double prob(Arm i) const { return probs[static_cast<std::size_t>(i - 1)]; }
};

struct Observation {
  Arm arm = 0;
  double reward = 0.0;
  friend bool operator==(const Observation&, const Observation&) = default;
};

// What the learner legally sees: the chosen arm, the reward it earned, and
// the rewards of the chosen arm's out-neighbors (and nothing else).
struct RoundObservation {
  Arm chosen = 0;
  double chosen_reward = 0.0;
  std::vector<Observation> observed;
};

// Builds the observation for pulling `chosen` under full reward vector `rewards`.
RoundObservation make_observation(const FeedbackGraph& g, Arm chosen, std::span<const double> rewards);

// q(i) = sum of probs over in-neighbors of i.
double observation_probability(const FeedbackGraph& g, std::span<const double> probs, Arm i);

// Inverse-CDF draw with u in [0, 1); never returns an arm of probability 0.
Arm sample_arm(std::span<const double> probs, double u);

}  // namespace gbl
