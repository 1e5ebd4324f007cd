#include "gbl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "gbl/errors.hpp"
#include "gbl/rng.hpp"

namespace gbl {

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  if (name == "bobw") return PolicyKind::bobw;
  if (name == "exp3g") return PolicyKind::exp3g;
  if (name == "uniform") return PolicyKind::uniform;
  return std::nullopt;
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::bobw: return "bobw";
    case PolicyKind::exp3g: return "exp3g";
    case PolicyKind::uniform: return "uniform";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (horizon < 1) throw InputError("horizon: must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta: must lie in (0, 1)");
  if (trace_stride < 1) throw InputError("trace_stride: must be >= 1");
  if (gamma_constant && !(*gamma_constant > 0.0)) throw InputError("gamma_constant: must be positive");
  const int k = std::holds_alternative<FeedbackGraph>(graph) ? std::get<FeedbackGraph>(graph).num_arms()
                                                             : std::get<GraphRecipe>(graph).num_arms;
  if (num_arms(environment) != k) {
    throw InputError("environment: has " + std::to_string(num_arms(environment)) + " arms but the graph has " +
                     std::to_string(k));
  }
  if (const auto* adv = std::get_if<AdversarialEnv>(&environment)) {
    if (adv->generator == AdversarialGenerator::table && adv->table && horizon > adv->table->rows) {
      throw InputError("horizon: " + std::to_string(horizon) + " exceeds the reward table length " +
                       std::to_string(adv->table->rows));
    }
  }
}

ResolvedRun resolve(const RunConfig& config) {
  config.validate();
  const CounterRng root = make_rng(config.seed);
  FeedbackGraph graph = std::visit(
      [&](const auto& spec) -> FeedbackGraph {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, FeedbackGraph>) {
          return spec;
        } else {
          auto seed = spec.seed;
          if (!seed && spec.family == GraphFamily::random_observable) seed = root.substream("graph").at(0);
          return make_graph(spec.family, spec.num_arms, spec.edge_prob, seed);
        }
      },
      config.graph);
  DominatingSet dom = config.dominating_set ? DominatingSet(graph, *config.dominating_set)
                                            : greedy_dominating_set(graph);
  Environment env = config.environment;
  if (auto* adv = std::get_if<AdversarialEnv>(&env)) {
    if (adv->generator != AdversarialGenerator::table && !adv->seed) {
      adv->seed = root.substream("adversary").at(0);
    }
  }
  return ResolvedRun{std::move(graph), std::move(dom), std::move(env)};
}

std::unique_ptr<Policy> make_policy(const RunConfig& config, const ResolvedRun& run) {
  switch (config.policy) {
    case PolicyKind::uniform:
      return std::make_unique<UniformPolicy>(run.graph.num_arms());
    case PolicyKind::exp3g:
      return std::make_unique<Exp3gPolicy>(run.graph, run.dom, config.horizon);
    case PolicyKind::bobw:
      return std::make_unique<BobwPolicy>(BobwParams(run.graph, run.dom, config.delta, config.gamma_constant),
                                          config.horizon);
  }
  throw InternalError("unknown policy kind");
}

double RunRecord::regret_at(std::int64_t round) const {
  auto it = std::lower_bound(trace.begin(), trace.end(), round,
                             [](const TracePoint& p, std::int64_t r) { return p.round < r; });
  if (it == trace.end() || it->round != round) {
    throw InputError("round " + std::to_string(round) + " is not on the recorded trace");
  }
  return it->regret;
}

RunRecord run_with_policy(const RunConfig& config, const ResolvedRun& run, Policy& policy, const RunHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  const int k = run.graph.num_arms();
  const auto ku = static_cast<std::size_t>(k);
  const CounterRng root = make_rng(config.seed);
  CounterRng sampling = root.substream("policy");
  CounterRng rewards_rng = root.substream("rewards");

  RunRecord rec;
  rec.seed = config.seed;
  rec.horizon = config.horizon;
  rec.stochastic = is_stochastic(run.environment);
  rec.pull_counts.assign(ku, 0);

  const auto* stochastic = std::get_if<StochasticEnv>(&run.environment);
  const double best_mean = stochastic ? stochastic->means[static_cast<std::size_t>(stochastic->best_arm() - 1)] : 0.0;
  CompensatedSum regret;                       // stochastic pseudo-regret
  std::vector<CompensatedSum> arm_totals(ku);  // adversarial: realized per-arm totals
  CompensatedSum learner_total;

  std::vector<double> rewards(ku);
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    const ActionDistribution& dist = policy.distribution();
    if (hooks.before_round) hooks.before_round(t, policy, dist);
    const Arm chosen = sample_arm(dist.probs, sampling.uniform());
    reward_vector(run.environment, t, rewards_rng, rewards);
    const RoundObservation obs = make_observation(run.graph, chosen, rewards);
    const RoundEvents events = policy.observe(obs);
    ++rec.pull_counts[static_cast<std::size_t>(chosen - 1)];

    double current = 0.0;
    if (stochastic) {
      regret.add(best_mean - stochastic->means[static_cast<std::size_t>(chosen - 1)]);
      current = regret.value();
    } else {
      for (std::size_t i = 0; i < ku; ++i) arm_totals[i].add(rewards[i]);
      learner_total.add(obs.chosen_reward);
      double best_total = arm_totals[0].value();
      for (std::size_t i = 1; i < ku; ++i) best_total = std::max(best_total, arm_totals[i].value());
      current = best_total - learner_total.value();
    }
    if (t % config.trace_stride == 0 || t == config.horizon || !events.empty()) {
      rec.trace.push_back({t, current});
    }
    if (hooks.after_round) hooks.after_round(RoundView{t, policy, dist, obs, rewards, events});
  }
  rec.total_regret = rec.trace.empty() ? 0.0 : rec.trace.back().regret;

  rec.tau.assign(ku, std::nullopt);
  rec.tau_dom.assign(ku, std::nullopt);
  rec.tau_prime.assign(ku, std::nullopt);
  if (const auto* bobw = dynamic_cast<const BobwPolicy*>(&policy)) {
    rec.tau = bobw->state().tau;
    rec.tau_dom = bobw->state().tau_dom;
    rec.tau_prime = bobw->state().tau_prime;
    rec.detect_round = bobw->state().detect_round;
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RunRecord run_once(const RunConfig& config, const RunHooks& hooks) {
  const ResolvedRun run = resolve(config);
  const auto policy = make_policy(config, run);
  return run_with_policy(config, run, *policy, hooks);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

AggregateRecord aggregate(std::vector<RunRecord> runs, std::int64_t trace_stride) {
  if (runs.empty()) throw InputError("nothing to aggregate");
  const std::int64_t horizon = runs.front().horizon;
  std::vector<std::int64_t> grid;
  for (std::int64_t r = trace_stride; r <= horizon; r += trace_stride) grid.push_back(r);
  if (grid.empty() || grid.back() != horizon) grid.push_back(horizon);

  AggregateRecord agg;
  std::vector<double> sample(runs.size());
  for (std::int64_t round : grid) {
    for (std::size_t i = 0; i < runs.size(); ++i) sample[i] = runs[i].regret_at(round);
    AggregatePoint p;
    p.round = round;
    double sum = 0.0;
    for (double v : sample) sum += v;
    p.mean = sum / static_cast<double>(sample.size());
    if (sample.size() > 1) {
      double ss = 0.0;
      for (double v : sample) ss += (v - p.mean) * (v - p.mean);
      p.std = std::sqrt(ss / static_cast<double>(sample.size() - 1));
    }
    p.q05 = quantile(sample, 0.05);
    p.q95 = quantile(sample, 0.95);
    agg.trace.push_back(p);
  }
  agg.runs = std::move(runs);
  return agg;
}

unsigned default_thread_cap() {
  if (const char* env = std::getenv("GBL_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

AggregateRecord run_replicated(const RunConfig& config, int n_seeds, unsigned max_threads, const RunHooks& hooks) {
  if (n_seeds < 1) throw InputError("n_seeds: must be >= 1");
  config.validate();
  const auto n = static_cast<std::size_t>(n_seeds);
  std::vector<std::optional<RunRecord>> results(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      RunConfig cfg = config;
      cfg.seed = config.seed + i;
      try {
        results[i] = run_once(cfg, hooks);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned cap = max_threads == 0 ? default_thread_cap() : max_threads;
  const auto n_threads = std::min<std::size_t>(cap, n);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  std::vector<RunRecord> runs;
  runs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i]) {
      throw std::runtime_error("replication with seed " + std::to_string(config.seed + i) + " failed: " + errors[i]);
    }
    runs.push_back(std::move(*results[i]));
  }
  return aggregate(std::move(runs), config.trace_stride);
}

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string trace_csv(const RunRecord& record) {
  std::string out = "round,regret\n";
  for (const auto& p : record.trace) out += std::to_string(p.round) + "," + format_number(p.regret) + "\n";
  return out;
}

std::string trace_csv(const AggregateRecord& record) {
  std::string out = "round,regret_mean,regret_std,regret_q05,regret_q95\n";
  for (const auto& p : record.trace) {
    out += std::to_string(p.round) + "," + format_number(p.mean) + "," + format_number(p.std) + "," +
           format_number(p.q05) + "," + format_number(p.q95) + "\n";
  }
  return out;
}

namespace {

nlohmann::ordered_json time_map(const std::vector<std::optional<std::int64_t>>& values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i]) out[std::to_string(i + 1)] = *values[i];
  return out;
}

nlohmann::ordered_json events_object(const RunRecord& record) {
  nlohmann::ordered_json doc;
  doc["tau"] = time_map(record.tau);
  doc["tau_dom"] = time_map(record.tau_dom);
  doc["tau_prime"] = time_map(record.tau_prime);
  doc["detect_round"] = record.detect_round ? nlohmann::ordered_json(*record.detect_round) : nlohmann::ordered_json(nullptr);
  doc["pull_counts"] = record.pull_counts;
  return doc;
}

}  // namespace

std::string events_json(const RunRecord& record) { return events_object(record).dump(); }

std::string run_record_json(const RunRecord& record) {
  nlohmann::ordered_json doc;
  doc["seed"] = record.seed;
  doc["horizon"] = record.horizon;
  doc["stochastic"] = record.stochastic;
  doc["total_regret"] = format_number(record.total_regret);
  doc["events"] = events_object(record);
  auto& trace = doc["trace"] = nlohmann::ordered_json::array();
  for (const auto& p : record.trace) trace.push_back({p.round, format_number(p.regret)});
  return doc.dump();
}

}  // namespace gbl
