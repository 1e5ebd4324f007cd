#include "gbl/exp3g.hpp"

#include <algorithm>
#include <cmath>

#include "gbl/errors.hpp"

namespace gbl {

Exp3gState exp3g_init(const FeedbackGraph& graph, const DominatingSet& dom, std::int64_t horizon) {
  if (horizon < 1) throw InputError("Exp3.G horizon must be >= 1, got " + std::to_string(horizon));
  if (graph.num_arms() < 2) throw InputError("Exp3.G needs K >= 2 arms");
  const double k = graph.num_arms();
  const double d = static_cast<double>(dom.size());
  const double h = static_cast<double>(horizon);
  const double log_k = std::log(k);
  const double gamma = std::min(0.5, std::cbrt(k * d * log_k / h));
  const double eta = std::min(std::sqrt(gamma * log_k / (h * k * d)), gamma / d);
  return exp3g_init_with(graph, dom, horizon, gamma, eta);
}

Exp3gState exp3g_init_with(const FeedbackGraph& graph, const DominatingSet& dom, std::int64_t horizon,
                           double gamma, double eta) {
  if (horizon < 1) throw InputError("Exp3.G horizon must be >= 1, got " + std::to_string(horizon));
  if (!(gamma >= 0.0 && gamma <= 0.5)) throw InputError("Exp3.G gamma must lie in [0, 1/2]");
  if (!(eta >= 0.0)) throw InputError("Exp3.G eta must be nonnegative");
  if (gamma > 0.0 && eta > gamma / static_cast<double>(dom.size()) * (1.0 + 1e-12)) {
    throw InputError("Exp3.G eta must not exceed gamma / |D|");
  }
  if (!covers_all_arms(graph, dom.members())) throw InputError("Exp3.G exploration set does not cover the graph");
  Exp3gState s;
  s.log_weights.assign(static_cast<std::size_t>(graph.num_arms()), 0.0);
  s.gamma = gamma;
  s.eta = eta;
  s.horizon = horizon;
  s.explore_set = dom.members();
  return s;
}

ActionDistribution exp3g_distribution(const Exp3gState& state) {
  const std::size_t k = state.log_weights.size();
  ActionDistribution d;
  d.gamma = state.gamma;
  d.exploit_part.assign(k, 0.0);
  d.explore_part.assign(k, 0.0);
  d.probs.assign(k, 0.0);

  const double top = *std::max_element(state.log_weights.begin(), state.log_weights.end());
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    d.exploit_part[i] = std::exp(state.log_weights[i] - top);
    total += d.exploit_part[i];
  }
  for (double& w : d.exploit_part) w /= total;
  const double share = 1.0 / static_cast<double>(state.explore_set.size());
  for (Arm j : state.explore_set) d.explore_part[static_cast<std::size_t>(j - 1)] = share;
  for (std::size_t i = 0; i < k; ++i) {
    d.probs[i] = (1.0 - state.gamma) * d.exploit_part[i] + state.gamma * d.explore_part[i];
  }
  return d;
}

void exp3g_update(Exp3gState& state, const FeedbackGraph& graph, const RoundObservation& obs,
                  const ActionDistribution& dist) {
  for (const auto& [arm, reward] : obs.observed) {
    if (!graph.has_edge(obs.chosen, arm)) {
      throw InputError("observation of arm " + std::to_string(arm) + " is not revealed by arm " +
                       std::to_string(obs.chosen));
    }
    const double q = observation_probability(graph, dist.probs, arm);
    if (!(q > 0.0)) {
      throw InternalError("arm " + std::to_string(arm) + " observed with zero observation probability");
    }
    state.log_weights[static_cast<std::size_t>(arm - 1)] += state.eta * reward / q;
  }
  ++state.round;
}

}  // namespace gbl
