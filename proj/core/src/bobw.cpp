#include "gbl/bobw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbl/errors.hpp"

namespace gbl {
namespace {

std::size_t idx(Arm i) { return static_cast<std::size_t>(i - 1); }

void require_bobw_phase(const BobwState& state, const char* op) {
  if (state.phase != Phase::bobw) {
    throw InternalError(std::string(op) + " called after the switch to Exp3.G");
  }
}

}  // namespace

double gamma_schedule(std::int64_t t, int num_arms, std::size_t dom_size) {
  const double c = std::cbrt(static_cast<double>(num_arms) * num_arms * static_cast<double>(dom_size));
  return std::min(1.0, c / std::cbrt(static_cast<double>(t)));
}

BobwParams::BobwParams(FeedbackGraph graph_in, DominatingSet dom_in, double delta_in,
                       std::optional<double> gamma_constant_in)
    : graph(std::move(graph_in)),
      dom(std::move(dom_in)),
      delta(delta_in),
      gamma_constant(gamma_constant_in) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1), got " + std::to_string(delta));
  if (graph.num_arms() < 2) throw InputError("the learner needs K >= 2 arms");
  for (Arm j : dom.members()) {
    if (j < 1 || j > graph.num_arms()) throw InputError("dominating set member outside the graph");
  }
  if (dom.size() == 0 || !covers_all_arms(graph, dom.members())) {
    throw InputError("dominating set does not cover the graph");
  }
  if (gamma_constant && !(*gamma_constant > 0.0)) throw InputError("gamma constant must be positive");
}

double BobwParams::schedule_constant() const {
  if (gamma_constant) return *gamma_constant;
  const double k = graph.num_arms();
  return std::cbrt(k * k * static_cast<double>(dom.size()));
}

double BobwParams::gamma(std::int64_t t) const {
  if (!gamma_constant) return gamma_schedule(t, graph.num_arms(), dom.size());
  return std::min(1.0, *gamma_constant / std::cbrt(static_cast<double>(t)));
}

BobwState BobwState::initial(const BobwParams& params) {
  const auto k = static_cast<std::size_t>(params.graph.num_arms());
  BobwState s;
  s.active.assign(k, 1);
  s.active_dom.assign(k, 0);
  for (Arm j : params.dom.members()) s.active_dom[idx(j)] = 1;
  s.tau.assign(k, std::nullopt);
  s.tau_dom.assign(k, std::nullopt);
  s.tau_prime.assign(k, std::nullopt);
  s.frozen_u.assign(k, 0.0);
  for (Arm j : params.dom.members()) s.frozen_u[idx(j)] = 1.0 / static_cast<double>(params.dom.size());
  s.est_sum.assign(k, {});
  s.inv_gamma_sum.assign(k, {});
  return s;
}

std::vector<Arm> BobwState::active_arms() const {
  std::vector<Arm> out;
  for (Arm i = 1; i <= num_arms(); ++i)
    if (is_active(i)) out.push_back(i);
  return out;
}

std::vector<Arm> BobwState::active_dom_arms() const {
  std::vector<Arm> out;
  for (Arm i = 1; i <= num_arms(); ++i)
    if (is_active_dom(i)) out.push_back(i);
  return out;
}

ActionDistribution action_distribution(const BobwState& state, const BobwParams& params) {
  require_bobw_phase(state, "action_distribution");
  const auto k = static_cast<std::size_t>(params.graph.num_arms());
  if (state.active.size() != k) throw InternalError("state and graph disagree on K");
  const auto t = static_cast<double>(state.round);

  ActionDistribution d;
  d.gamma = params.gamma(state.round);
  d.exploit_part.assign(k, 0.0);
  d.explore_part.assign(k, 0.0);
  d.probs.assign(k, 0.0);

  const auto n_active = std::count(state.active.begin(), state.active.end(), 1);
  if (n_active == 0) throw InternalError("active set is empty");
  for (std::size_t i = 0; i < k; ++i)
    if (state.active[i]) d.exploit_part[i] = 1.0 / static_cast<double>(n_active);

  // Deleted dominating arms keep a decaying share u_j * tau_j^D / t.
  double deleted_mass = 0.0;
  std::size_t n_active_dom = 0;
  for (Arm j : params.dom.members()) {
    if (state.is_active_dom(j)) {
      ++n_active_dom;
      continue;
    }
    const auto& td = state.tau_dom[idx(j)];
    if (!td) throw InternalError("deleted dominating arm without a deletion time");
    const double share = state.frozen_u[idx(j)] * static_cast<double>(*td) / t;
    d.explore_part[idx(j)] = share;
    deleted_mass += share;
  }
  if (n_active_dom > 0) {
    const double each = std::max(0.0, 1.0 - deleted_mass) / static_cast<double>(n_active_dom);
    for (Arm j : params.dom.members())
      if (state.is_active_dom(j)) d.explore_part[idx(j)] = each;
  }
  double explore_total = std::accumulate(d.explore_part.begin(), d.explore_part.end(), 0.0);
  if (explore_total > 1.0) {
    for (double& p : d.explore_part) p /= explore_total;
    explore_total = 1.0;
  }
  // Whatever exploration mass is left over goes back to the active set.
  const double residual = d.gamma * std::max(0.0, 1.0 - explore_total);
  for (std::size_t i = 0; i < k; ++i) {
    d.probs[i] = (1.0 - d.gamma) * d.exploit_part[i] + d.gamma * d.explore_part[i] + residual * d.exploit_part[i];
  }
  return d;
}

void observe_update(BobwState& state, const RoundObservation& obs, const ActionDistribution& dist,
                    const BobwParams& params) {
  require_bobw_phase(state, "observe_update");
  const auto& g = params.graph;
  for (const auto& [arm, reward] : obs.observed) {
    if (!g.has_edge(obs.chosen, arm)) {
      throw InputError("observation of arm " + std::to_string(arm) + " is not revealed by arm " +
                       std::to_string(obs.chosen));
    }
    const double q = observation_probability(g, dist.probs, arm);
    if (!(q > 0.0)) {
      throw InternalError("arm " + std::to_string(arm) + " observed with zero observation probability");
    }
    state.est_sum[idx(arm)].add(reward / q);
  }
  const double inv_gamma = 1.0 / dist.gamma;
  for (std::size_t i = 0; i < state.inv_gamma_sum.size(); ++i) {
    const auto& tp = state.tau_prime[i];
    if (!tp || *tp >= state.round) state.inv_gamma_sum[i].add(inv_gamma);
  }
}

double radius_value(std::size_t dom_size, std::int64_t t, std::optional<std::int64_t> tau_prime,
                    double inv_gamma_sum, double gamma_t, double delta) {
  const double d = static_cast<double>(dom_size);
  const double tt = static_cast<double>(t);
  const double log_term = std::log(tt / delta);
  double variance = d / (tt * tt) * inv_gamma_sum;
  double horizon_sq = tt * tt;
  if (tau_prime) {
    const double tp = static_cast<double>(*tau_prime);
    variance += d * std::max(tt - tp, 0.0) / (gamma_t * tp * tt);
    horizon_sq = std::min(horizon_sq, tp * tp);
  }
  return std::sqrt(4.0 * variance * log_term + 5.0 * d * d / (gamma_t * gamma_t * horizon_sq) * log_term * log_term);
}

double radius(const BobwState& state, Arm i, std::int64_t t, const BobwParams& params) {
  return radius_value(params.dom.size(), t, state.tau_prime[idx(i)], state.inv_gamma_sum[idx(i)].value(),
                      params.gamma(t), params.delta);
}

Arm leader(const BobwState& state, std::int64_t t) {
  Arm best = 0;
  double best_value = 0.0;
  for (Arm i = 1; i <= state.num_arms(); ++i) {
    if (!state.is_active(i)) continue;
    const double h = state.estimate(i, t);
    if (best == 0 || h > best_value) {
      best = i;
      best_value = h;
    }
  }
  if (best == 0) throw InternalError("active set is empty");
  return best;
}

std::vector<Arm> elimination_scan(BobwState& state, std::int64_t t, const BobwParams& params) {
  require_bobw_phase(state, "elimination_scan");
  const Arm top = leader(state, t);
  const double top_value = state.estimate(top, t);
  const double top_radius = radius(state, top, t, params);
  std::vector<Arm> removed;
  for (Arm i = 1; i <= state.num_arms(); ++i) {
    if (!state.is_active(i) || i == top) continue;
    const double gap = top_value - state.estimate(i, t);
    if (gap > 5.0 * top_radius + 3.0 * radius(state, i, t, params)) removed.push_back(i);
  }
  for (Arm i : removed) {
    state.active[idx(i)] = 0;
    state.tau[idx(i)] = t;
  }
  return removed;
}

std::vector<Arm> dominating_scan(BobwState& state, std::int64_t t, const ActionDistribution& dist,
                                 const BobwParams& params) {
  require_bobw_phase(state, "dominating_scan");
  const bool single_left = std::count(state.active.begin(), state.active.end(), 1) == 1;
  std::vector<Arm> removed;
  for (Arm j : params.dom.members()) {
    if (!state.is_active_dom(j)) continue;
    bool needed = false;
    if (!single_left) {
      for (Arm i : params.graph.out_neighbors(j)) {
        if (state.is_active(i)) {
          needed = true;
          break;
        }
      }
    }
    if (!needed) removed.push_back(j);
  }
  for (Arm j : removed) {
    state.active_dom[idx(j)] = 0;
    state.tau_dom[idx(j)] = t;
    state.frozen_u[idx(j)] = dist.explore_part[idx(j)];
  }
  return removed;
}

std::vector<Arm> tau_prime_scan(BobwState& state, std::int64_t t, const BobwParams& params) {
  require_bobw_phase(state, "tau_prime_scan");
  std::vector<Arm> assigned;
  for (Arm i = 1; i <= state.num_arms(); ++i) {
    if (state.tau_prime[idx(i)]) continue;
    bool all_deleted = true;
    for (Arm j : params.graph.in_neighbors(i)) {
      if (!params.dom.contains(j)) continue;
      const auto& td = state.tau_dom[idx(j)];
      if (!td || *td > t) {
        all_deleted = false;
        break;
      }
    }
    if (all_deleted) {
      state.tau_prime[idx(i)] = t;
      assigned.push_back(i);
    }
  }
  return assigned;
}

bool adversary_check(BobwState& state, std::int64_t t, const BobwParams& params) {
  require_bobw_phase(state, "adversary_check");
  const Arm top = leader(state, t);
  const double top_value = state.estimate(top, t);
  std::optional<double> top_radius;
  for (Arm i = 1; i <= state.num_arms(); ++i) {
    if (state.is_active(i)) continue;
    if (!top_radius) top_radius = radius(state, top, t, params);
    const double gap = top_value - state.estimate(i, t);
    if (gap <= 3.0 * *top_radius + radius(state, i, t, params)) {
      state.phase = Phase::exp3g;
      state.detect_round = t;
      return true;
    }
  }
  return false;
}

RoundEvents step(BobwState& state, const RoundObservation& obs, const ActionDistribution& dist,
                 const BobwParams& params) {
  require_bobw_phase(state, "step");
  const std::int64_t t = state.round;
  RoundEvents events;
  observe_update(state, obs, dist, params);
  events.eliminated = elimination_scan(state, t, params);
  events.dom_deleted = dominating_scan(state, t, dist, params);
  events.tau_prime_set = tau_prime_scan(state, t, params);
  events.detected = adversary_check(state, t, params);
  state.round = t + 1;
  return events;
}

}  // namespace gbl
