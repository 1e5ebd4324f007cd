#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gbl/bobw.hpp"
#include "gbl/environment.hpp"
#include "gbl/graph.hpp"
#include "gbl/policy.hpp"

namespace gbl {

enum class PolicyKind { bobw, exp3g, uniform };

std::optional<PolicyKind> parse_policy_kind(std::string_view name);
std::string_view to_string(PolicyKind kind);

// Graph built from a family at run time; a missing seed is drawn from the
// run seed's "graph" stream.
struct GraphRecipe {
  GraphFamily family = GraphFamily::bandit;
  int num_arms = 2;
  std::optional<double> edge_prob;
  std::optional<std::uint64_t> seed;
};

using GraphSpec = std::variant<FeedbackGraph, GraphRecipe>;

struct RunConfig {
  GraphSpec graph = GraphRecipe{};
  std::optional<std::vector<Arm>> dominating_set;  // nullopt: greedy
  PolicyKind policy = PolicyKind::bobw;
  Environment environment;
  std::int64_t horizon = 1000;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::int64_t trace_stride = 100;
  std::optional<double> gamma_constant;

  // Throws InputError naming the offending field.
  void validate() const;
};

struct ResolvedRun {
  FeedbackGraph graph;
  DominatingSet dom;
  Environment environment;
};

ResolvedRun resolve(const RunConfig& config);
std::unique_ptr<Policy> make_policy(const RunConfig& config, const ResolvedRun& run);

struct TracePoint {
  std::int64_t round = 0;
  double regret = 0.0;
  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  bool stochastic = true;
  // Every multiple of trace_stride, the final round, and every round with an event.
  std::vector<TracePoint> trace;
  // Per arm (index arm - 1); all unset for policies without an elimination phase.
  std::vector<std::optional<std::int64_t>> tau;
  std::vector<std::optional<std::int64_t>> tau_dom;
  std::vector<std::optional<std::int64_t>> tau_prime;
  std::optional<std::int64_t> detect_round;
  std::vector<std::int64_t> pull_counts;
  double total_regret = 0.0;
  double wall_seconds = 0.0;  // excluded from every serialized form

  [[nodiscard]] double regret_at(std::int64_t round) const;
};

struct RoundView {
  std::int64_t t;
  const Policy& policy;
  const ActionDistribution& dist;
  const RoundObservation& obs;
  std::span<const double> rewards;
  const RoundEvents& events;
};

struct RunHooks {
  // After the distribution is queried, before sampling.
  std::function<void(std::int64_t, const Policy&, const ActionDistribution&)> before_round;
  // After the policy has consumed the round's observation.
  std::function<void(const RoundView&)> after_round;
};

RunRecord run_once(const RunConfig& config, const RunHooks& hooks = {});
// Drives a caller-supplied policy; config.policy is ignored.
RunRecord run_with_policy(const RunConfig& config, const ResolvedRun& run, Policy& policy,
                          const RunHooks& hooks = {});

struct AggregatePoint {
  std::int64_t round = 0;
  double mean = 0.0;
  double std = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  friend bool operator==(const AggregatePoint&, const AggregatePoint&) = default;
};

struct AggregateRecord {
  std::vector<AggregatePoint> trace;  // multiples of trace_stride plus the final round
  std::vector<RunRecord> runs;        // in seed order
  [[nodiscard]] const AggregatePoint& final_point() const { return trace.back(); }
};

// Replication i uses seed config.seed + i. Runs concurrently on up to
// max_threads threads (0: GBL_THREADS or the hardware concurrency); the result
// does not depend on scheduling.
AggregateRecord run_replicated(const RunConfig& config, int n_seeds, unsigned max_threads = 0,
                               const RunHooks& hooks = {});
AggregateRecord aggregate(std::vector<RunRecord> runs, std::int64_t trace_stride);

// Linear-interpolation sample quantile (type 7) of an unsorted sample.
double quantile(std::vector<double> values, double p);

unsigned default_thread_cap();

// Serialized forms.
std::string trace_csv(const RunRecord& record);          // round,regret
std::string trace_csv(const AggregateRecord& record);    // round,regret_mean,regret_std,regret_q05,regret_q95
std::string events_json(const RunRecord& record);        // tau, tau_dom, tau_prime, detect_round, pull_counts
std::string run_record_json(const RunRecord& record);    // everything except wall time
std::string format_number(double v);

}  // namespace gbl
