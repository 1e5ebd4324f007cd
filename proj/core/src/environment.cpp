#include "gbl/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gbl/errors.hpp"

namespace gbl {
namespace {

void check_means(const std::vector<double>& means, const char* what) {
  if (means.size() < 2) throw InputError(std::string(what) + " needs at least two arms");
  for (double m : means) {
    if (!(m >= 0.0 && m <= 1.0)) throw InputError(std::string(what) + " must lie in [0, 1]");
  }
}

// Bernoulli draw addressed by (seed, round, arm).
double bernoulli_at(const CounterRng& stream, std::int64_t t, Arm arm, int k, double mean) {
  const auto index = static_cast<std::uint64_t>(t - 1) * static_cast<std::uint64_t>(k) +
                     static_cast<std::uint64_t>(arm - 1);
  return stream.uniform_at(index) < mean ? 1.0 : 0.0;
}

CounterRng adversary_stream(const AdversarialEnv& env) {
  if (!env.seed) throw InputError("adversarial generator needs a seed");
  return make_rng(*env.seed).substream("adversary");
}

}  // namespace

StochasticEnv StochasticEnv::make(std::vector<double> means, RewardLaw law, double width) {
  check_means(means, "stochastic means");
  if (law == RewardLaw::uniform_pm && !(width >= 0.0)) throw InputError("uniform_pm width must be >= 0");
  const double top = *std::max_element(means.begin(), means.end());
  const auto n_top = std::count(means.begin(), means.end(), top);
  if (n_top > 1 && static_cast<std::size_t>(n_top) != means.size()) {
    throw InputError("stochastic means must have a unique maximum");
  }
  return StochasticEnv{std::move(means), law, width};
}

Arm StochasticEnv::best_arm() const {
  return static_cast<Arm>(std::max_element(means.begin(), means.end()) - means.begin()) + 1;
}

double StochasticEnv::gap(Arm i) const {
  return means[static_cast<std::size_t>(best_arm() - 1)] - means[static_cast<std::size_t>(i - 1)];
}

RewardTable parse_table_csv(std::string_view text) {
  RewardTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    int cols = 0;
    std::size_t field_start = 0;
    while (true) {
      auto comma = line.find(',', field_start);
      std::string_view field = line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos
                                                                                        : comma - field_start);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw InputError("reward table line " + std::to_string(line_no) + ": not a number: '" +
                         std::string(field) + "'");
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError("reward table line " + std::to_string(line_no) + ": value outside [0, 1]");
      }
      table.values.push_back(v);
      ++cols;
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
    if (table.rows == 0) {
      table.cols = cols;
    } else if (cols != table.cols) {
      throw InputError("reward table line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.cols) + " columns, got " + std::to_string(cols));
    }
    ++table.rows;
  }
  if (table.rows == 0) throw InputError("reward table is empty");
  return table;
}

RewardTable load_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open reward table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table_csv(buf.str());
}

std::string table_to_csv(const RewardTable& table) {
  std::string out;
  char buf[32];
  for (int r = 0; r < table.rows; ++r) {
    for (int c = 0; c < table.cols; ++c) {
      if (c > 0) out.push_back(',');
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf,
                                     table.values[static_cast<std::size_t>(r * table.cols + c)]);
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void write_table_csv(const RewardTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write reward table " + path.string());
  out << table_to_csv(table);
}

AdversarialEnv AdversarialEnv::from_table(RewardTable table) {
  if (table.rows < 1 || table.cols < 2) throw InputError("reward table needs >= 1 row and >= 2 columns");
  for (double v : table.values)
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("reward table values must lie in [0, 1]");
  AdversarialEnv env;
  env.generator = AdversarialGenerator::table;
  env.table = std::make_shared<const RewardTable>(std::move(table));
  return env;
}

AdversarialEnv AdversarialEnv::mean_switch(std::vector<double> base_means, std::int64_t period,
                                           std::optional<std::uint64_t> seed) {
  check_means(base_means, "mean_switch base means");
  if (period < 1) throw InputError("mean_switch period must be >= 1");
  AdversarialEnv env;
  env.generator = AdversarialGenerator::mean_switch;
  env.base_means = std::move(base_means);
  env.switch_period = period;
  env.seed = seed;
  return env;
}

AdversarialEnv AdversarialEnv::drift(std::vector<double> base_means, std::int64_t period, double amplitude,
                                     std::optional<std::uint64_t> seed) {
  check_means(base_means, "drift base means");
  if (period < 1) throw InputError("drift period must be >= 1");
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) throw InputError("drift amplitude must lie in [0, 1]");
  AdversarialEnv env;
  env.generator = AdversarialGenerator::drift;
  env.base_means = std::move(base_means);
  env.switch_period = period;
  env.drift_amplitude = amplitude;
  env.seed = seed;
  return env;
}

int AdversarialEnv::num_arms() const {
  if (generator == AdversarialGenerator::table) return table ? table->cols : 0;
  return static_cast<int>(base_means.size());
}

std::vector<double> AdversarialEnv::means_at(std::int64_t t) const {
  const auto k = base_means.size();
  std::vector<double> means(k);
  switch (generator) {
    case AdversarialGenerator::table:
      throw InputError("table environments have no mean vector");
    case AdversarialGenerator::mean_switch: {
      const auto shift = static_cast<std::size_t>((t - 1) / switch_period) % k;
      for (std::size_t i = 0; i < k; ++i) means[(i + shift) % k] = base_means[i];
      break;
    }
    case AdversarialGenerator::drift: {
      const double phase = static_cast<double>(t) / static_cast<double>(switch_period);
      for (std::size_t i = 0; i < k; ++i) {
        const double angle = 2.0 * std::numbers::pi * (phase + static_cast<double>(i) / static_cast<double>(k));
        means[i] = std::clamp(base_means[i] + drift_amplitude * std::sin(angle), 0.0, 1.0);
      }
      break;
    }
  }
  return means;
}

int num_arms(const Environment& env) {
  return std::visit([](const auto& e) { return e.num_arms(); }, env);
}

bool is_stochastic(const Environment& env) { return std::holds_alternative<StochasticEnv>(env); }

void reward_vector(const Environment& env, std::int64_t t, CounterRng& rng, std::span<double> out) {
  if (t < 1) throw InputError("rounds start at 1");
  if (const auto* s = std::get_if<StochasticEnv>(&env)) {
    for (std::size_t i = 0; i < s->means.size(); ++i) {
      const double mu = s->means[i];
      const double u = rng.uniform();
      if (s->law == RewardLaw::bernoulli) {
        out[i] = u < mu ? 1.0 : 0.0;
      } else {
        out[i] = std::clamp(mu - s->width + 2.0 * s->width * u, 0.0, 1.0);
      }
    }
    return;
  }
  const auto& a = std::get<AdversarialEnv>(env);
  const int k = a.num_arms();
  if (a.generator == AdversarialGenerator::table) {
    if (t > a.table->rows) {
      throw InputError("round " + std::to_string(t) + " beyond reward table length " + std::to_string(a.table->rows));
    }
    for (Arm i = 1; i <= k; ++i) out[static_cast<std::size_t>(i - 1)] = a.table->at(t, i);
    return;
  }
  const CounterRng stream = adversary_stream(a);
  const auto means = a.means_at(t);
  for (Arm i = 1; i <= k; ++i) {
    out[static_cast<std::size_t>(i - 1)] = bernoulli_at(stream, t, i, k, means[static_cast<std::size_t>(i - 1)]);
  }
}

std::vector<double> reward_vector(const Environment& env, std::int64_t t, CounterRng& rng) {
  std::vector<double> out(static_cast<std::size_t>(num_arms(env)));
  reward_vector(env, t, rng, out);
  return out;
}

BestArm best_fixed_arm(const Environment& env, std::int64_t up_to) {
  if (const auto* s = std::get_if<StochasticEnv>(&env)) {
    const Arm best = s->best_arm();
    return {best, static_cast<double>(up_to) * s->means[static_cast<std::size_t>(best - 1)]};
  }
  const auto& a = std::get<AdversarialEnv>(env);
  const auto k = static_cast<std::size_t>(a.num_arms());
  std::vector<double> totals(k, 0.0);
  std::vector<double> row(k);
  CounterRng unused;
  for (std::int64_t t = 1; t <= up_to; ++t) {
    reward_vector(env, t, unused, row);
    for (std::size_t i = 0; i < k; ++i) totals[i] += row[i];
  }
  const auto it = std::max_element(totals.begin(), totals.end());
  return {static_cast<Arm>(it - totals.begin()) + 1, *it};
}

RewardTable materialize(const AdversarialEnv& env, std::int64_t up_to) {
  RewardTable table;
  table.rows = static_cast<int>(up_to);
  table.cols = env.num_arms();
  table.values.resize(static_cast<std::size_t>(table.rows) * static_cast<std::size_t>(table.cols));
  CounterRng unused;
  const Environment wrapped = env;
  for (std::int64_t t = 1; t <= up_to; ++t) {
    reward_vector(wrapped, t, unused,
                  std::span<double>(table.values).subspan(static_cast<std::size_t>(t - 1) *
                                                              static_cast<std::size_t>(table.cols),
                                                          static_cast<std::size_t>(table.cols)));
  }
  return table;
}

}  // namespace gbl
