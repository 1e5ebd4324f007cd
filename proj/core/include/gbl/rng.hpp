#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace gbl {

// Counter-based generator: the i-th output is a pure function of (key, i).
// Streams are split by name, so consumers with different names never share
// draws and any draw can be addressed directly with at().
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng() = default;
  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  // Independent child stream identified by name.
  [[nodiscard]] CounterRng substream(std::string_view name) const;
  // Independent child stream identified by an integer (e.g. replication id).
  [[nodiscard]] CounterRng substream(std::uint64_t id) const;

  result_type operator()() { return at(counter_++); }
  [[nodiscard]] result_type at(std::uint64_t index) const;

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return to_unit(operator()()); }
  [[nodiscard]] double uniform_at(std::uint64_t index) const { return to_unit(at(index)); }

  [[nodiscard]] std::uint64_t key() const { return key_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  static std::uint64_t mix(std::uint64_t x);
  static double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }

  friend bool operator==(const CounterRng&, const CounterRng&) = default;

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Root stream for a run seed.
CounterRng make_rng(std::uint64_t seed);

}  // namespace gbl
