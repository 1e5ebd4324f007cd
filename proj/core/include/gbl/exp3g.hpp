#pragma once

#include <cstdint>
#include <vector>

#include "gbl/graph.hpp"
#include "gbl/round.hpp"

namespace gbl {

// Exponential weights with exploration spread uniformly over a dominating set,
// in the gain (reward) formulation. Tuned for the weakly observable regime:
//   gamma = min{1/2, (K |D| ln K)^(1/3) H^(-1/3)}
//   eta   = min{sqrt(gamma ln K / (H K |D|)), gamma / |D|}
// where H is the horizon the instance is expected to run for.
struct Exp3gState {
  std::vector<double> log_weights;
  double gamma = 0.0;
  double eta = 0.0;
  std::int64_t horizon = 0;
  std::vector<Arm> explore_set;
  std::int64_t round = 0;

  friend bool operator==(const Exp3gState&, const Exp3gState&) = default;
};

Exp3gState exp3g_init(const FeedbackGraph& graph, const DominatingSet& dom, std::int64_t horizon);

// Explicit parameters. gamma may be 0 here (pure softmax), which voids the
// observation-probability floor; only tests should do that.
Exp3gState exp3g_init_with(const FeedbackGraph& graph, const DominatingSet& dom, std::int64_t horizon,
                           double gamma, double eta);

ActionDistribution exp3g_distribution(const Exp3gState& state);

void exp3g_update(Exp3gState& state, const FeedbackGraph& graph, const RoundObservation& obs,
                  const ActionDistribution& dist);

}  // namespace gbl
