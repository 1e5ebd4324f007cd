#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gbl/graph.hpp"
#include "gbl/rng.hpp"

namespace gbl {

enum class RewardLaw { bernoulli, uniform_pm };

// i.i.d. rewards with means `means`. uniform_pm draws from
// [mu - width, mu + width] clipped to [0, 1].
struct StochasticEnv {
  std::vector<double> means;
  RewardLaw law = RewardLaw::bernoulli;
  double width = 0.0;

  // Throws InputError on means outside [0, 1] or a tied maximum (an all-equal
  // vector is accepted as the zero-gap instance with best arm 1).
  static StochasticEnv make(std::vector<double> means, RewardLaw law = RewardLaw::bernoulli, double width = 0.0);

  [[nodiscard]] int num_arms() const { return static_cast<int>(means.size()); }
  [[nodiscard]] Arm best_arm() const;
  [[nodiscard]] double gap(Arm i) const;
};

// T x K matrix of rewards, row-major.
struct RewardTable {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  [[nodiscard]] double at(std::int64_t round, Arm arm) const {
    return values[static_cast<std::size_t>(round - 1) * static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(arm - 1)];
  }
  friend bool operator==(const RewardTable&, const RewardTable&) = default;
};

// No header, T rows of K comma-separated values in [0, 1].
RewardTable parse_table_csv(std::string_view text);
RewardTable load_table_csv(const std::filesystem::path& path);
std::string table_to_csv(const RewardTable& table);
void write_table_csv(const RewardTable& table, const std::filesystem::path& path);

enum class AdversarialGenerator { table, mean_switch, drift };

// Oblivious adversary: the reward at (t, arm) is a pure function of the
// configuration and seed, never of the learner's actions.
//   mean_switch: in period k = (t-1) / switch_period the means are base_means
//                rotated right by k positions; rewards are Bernoulli draws.
//   drift:       mean_i(t) = clip(base_i + amplitude * sin(2 pi (t / period + (i-1) / K)));
//                rewards are Bernoulli draws.
struct AdversarialEnv {
  AdversarialGenerator generator = AdversarialGenerator::table;
  std::shared_ptr<const RewardTable> table;
  std::int64_t switch_period = 1;
  std::vector<double> base_means;
  double drift_amplitude = 0.25;
  std::optional<std::uint64_t> seed;

  static AdversarialEnv from_table(RewardTable table);
  static AdversarialEnv mean_switch(std::vector<double> base_means, std::int64_t period,
                                    std::optional<std::uint64_t> seed);
  static AdversarialEnv drift(std::vector<double> base_means, std::int64_t period, double amplitude,
                              std::optional<std::uint64_t> seed);

  [[nodiscard]] int num_arms() const;
  // Mean vector in force at round t (mean_switch and drift only).
  [[nodiscard]] std::vector<double> means_at(std::int64_t t) const;
};

using Environment = std::variant<StochasticEnv, AdversarialEnv>;

int num_arms(const Environment& env);
bool is_stochastic(const Environment& env);

// Fills `out` (length K) with r_t. The rng is consumed for stochastic
// environments only; adversarial rewards ignore it.
void reward_vector(const Environment& env, std::int64_t t, CounterRng& rng, std::span<double> out);
std::vector<double> reward_vector(const Environment& env, std::int64_t t, CounterRng& rng);

struct BestArm {
  Arm arm = 0;
  double cumulative = 0.0;
};

// Stochastic: (i*, up_to * mu_{i*}). Adversarial: realized best cumulative
// reward over rounds 1..up_to, smallest index on ties.
BestArm best_fixed_arm(const Environment& env, std::int64_t up_to);

// Full up_to x K reward matrix of an adversarial environment.
RewardTable materialize(const AdversarialEnv& env, std::int64_t up_to);

}  // namespace gbl
