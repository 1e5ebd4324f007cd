#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gbl/graph.hpp"
#include "gbl/round.hpp"

namespace gbl {

// Exploration weight min{1, c * t^(-1/3)} with c = K^(2/3) |D|^(1/3).
double gamma_schedule(std::int64_t t, int num_arms, std::size_t dom_size);

struct BobwParams {
  BobwParams(FeedbackGraph graph, DominatingSet dom, double delta,
             std::optional<double> gamma_constant = std::nullopt);

  FeedbackGraph graph;
  DominatingSet dom;
  double delta;
  // Replaces K^(2/3) |D|^(1/3) in the schedule when set.
  std::optional<double> gamma_constant;

  [[nodiscard]] double gamma(std::int64_t t) const;
  [[nodiscard]] double schedule_constant() const;
};

enum class Phase { bobw, exp3g };

// Elimination-phase learner state. Per-arm vectors are indexed by arm - 1;
// tau_dom and frozen_u are only meaningful for members of the dominating set.
struct BobwState {
  std::int64_t round = 1;  // the round about to be played / being scanned
  Phase phase = Phase::bobw;
  std::vector<char> active;
  std::vector<char> active_dom;
  std::vector<std::optional<std::int64_t>> tau;
  std::vector<std::optional<std::int64_t>> tau_dom;
  std::vector<std::optional<std::int64_t>> tau_prime;
  std::vector<double> frozen_u;
  std::vector<CompensatedSum> est_sum;
  std::vector<CompensatedSum> inv_gamma_sum;
  std::optional<std::int64_t> detect_round;

  static BobwState initial(const BobwParams& params);

  [[nodiscard]] int num_arms() const { return static_cast<int>(active.size()); }
  [[nodiscard]] bool is_active(Arm i) const { return active[static_cast<std::size_t>(i - 1)] != 0; }
  [[nodiscard]] bool is_active_dom(Arm i) const { return active_dom[static_cast<std::size_t>(i - 1)] != 0; }
  [[nodiscard]] std::vector<Arm> active_arms() const;
  [[nodiscard]] std::vector<Arm> active_dom_arms() const;
  // Importance-weighted mean estimate after t rounds.
  [[nodiscard]] double estimate(Arm i, std::int64_t t) const {
    return est_sum[static_cast<std::size_t>(i - 1)].value() / static_cast<double>(t);
  }

  friend bool operator==(const BobwState&, const BobwState&) = default;
};

struct RoundEvents {
  std::vector<Arm> eliminated;
  std::vector<Arm> dom_deleted;
  std::vector<Arm> tau_prime_set;
  bool detected = false;

  [[nodiscard]] bool empty() const {
    return eliminated.empty() && dom_deleted.empty() && tau_prime_set.empty() && !detected;
  }
};

ActionDistribution action_distribution(const BobwState& state, const BobwParams& params);

// Adds round state.round's importance-weighted observations; does not advance the round.
void observe_update(BobwState& state, const RoundObservation& obs, const ActionDistribution& dist,
                    const BobwParams& params);

// Confidence width of the estimate for an arm with the given truncation time
// (unset = never truncated) and truncated inverse-gamma sum.
double radius_value(std::size_t dom_size, std::int64_t t, std::optional<std::int64_t> tau_prime,
                    double inv_gamma_sum, double gamma_t, double delta);

double radius(const BobwState& state, Arm i, std::int64_t t, const BobwParams& params);

// argmax of the estimate over the active set, smallest index on ties.
Arm leader(const BobwState& state, std::int64_t t);

std::vector<Arm> elimination_scan(BobwState& state, std::int64_t t, const BobwParams& params);
std::vector<Arm> dominating_scan(BobwState& state, std::int64_t t, const ActionDistribution& dist,
                                 const BobwParams& params);
std::vector<Arm> tau_prime_scan(BobwState& state, std::int64_t t, const BobwParams& params);
bool adversary_check(BobwState& state, std::int64_t t, const BobwParams& params);

// One full round: update, eliminate, shrink the dominating set, assign tau',
// test for an adversary, then advance the round counter.
RoundEvents step(BobwState& state, const RoundObservation& obs, const ActionDistribution& dist,
                 const BobwParams& params);

}  // namespace gbl
