#include "gbl/round.hpp"

#include "gbl/errors.hpp"

namespace gbl {

RoundObservation make_observation(const FeedbackGraph& g, Arm chosen, std::span<const double> rewards) {
  RoundObservation obs;
  obs.chosen = chosen;
  obs.chosen_reward = rewards[static_cast<std::size_t>(chosen - 1)];
  const auto out = g.out_neighbors(chosen);
  obs.observed.reserve(out.size());
  for (Arm j : out) obs.observed.push_back({j, rewards[static_cast<std::size_t>(j - 1)]});
  return obs;
}

double observation_probability(const FeedbackGraph& g, std::span<const double> probs, Arm i) {
  double q = 0.0;
  for (Arm j : g.in_neighbors(i)) q += probs[static_cast<std::size_t>(j - 1)];
  return q;
}

Arm sample_arm(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  Arm last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<Arm>(i + 1);
    cumulative += probs[i];
    if (u < cumulative) return last_positive;
  }
  if (last_positive == 0) throw InternalError("cannot sample from an all-zero distribution");
  // rounding left u above the final cumulative sum
  return last_positive;
}

}  // namespace gbl
