#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gbl/bobw.hpp"
#include "gbl/exp3g.hpp"
#include "gbl/round.hpp"

namespace gbl {

// Learner as seen by the harness. Each round the harness calls distribution()
// once, samples from it, then hands the masked observation to observe().
class Policy {
 public:
  virtual ~Policy() = default;
  [[nodiscard]] virtual std::string_view name() const = 0;
  virtual const ActionDistribution& distribution() = 0;
  virtual RoundEvents observe(const RoundObservation& obs) = 0;
};

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(int num_arms);
  [[nodiscard]] std::string_view name() const override { return "uniform"; }
  const ActionDistribution& distribution() override { return dist_; }
  RoundEvents observe(const RoundObservation&) override { return {}; }

 private:
  ActionDistribution dist_;
};

class Exp3gPolicy final : public Policy {
 public:
  Exp3gPolicy(FeedbackGraph graph, const DominatingSet& dom, std::int64_t horizon);
  [[nodiscard]] std::string_view name() const override { return "exp3g"; }
  const ActionDistribution& distribution() override;
  RoundEvents observe(const RoundObservation& obs) override;
  [[nodiscard]] const Exp3gState& state() const { return state_; }

 private:
  FeedbackGraph graph_;
  Exp3gState state_;
  ActionDistribution dist_;
};

// Elimination phase until an adversary is detected at round tau, then a cold
// Exp3.G over the same dominating set for the remaining horizon - tau rounds.
class BobwPolicy final : public Policy {
 public:
  BobwPolicy(BobwParams params, std::int64_t horizon);

  [[nodiscard]] std::string_view name() const override { return "bobw"; }
  const ActionDistribution& distribution() override;
  RoundEvents observe(const RoundObservation& obs) override;

  [[nodiscard]] const BobwParams& params() const { return params_; }
  [[nodiscard]] const BobwState& state() const { return state_; }
  [[nodiscard]] const std::optional<Exp3gState>& exp3g_state() const { return exp3g_; }
  [[nodiscard]] std::int64_t horizon() const { return horizon_; }

  // JSON snapshot of the full learner state; restoring it and replaying the
  // same random stream reproduces the original run exactly.
  [[nodiscard]] std::string snapshot() const;
  static BobwPolicy restore(BobwParams params, std::int64_t horizon, std::string_view snapshot);

 private:
  BobwParams params_;
  std::int64_t horizon_;
  BobwState state_;
  std::optional<Exp3gState> exp3g_;
  ActionDistribution dist_;
  bool dist_ready_ = false;
};

}  // namespace gbl
