#include "gbl/rng.hpp"

namespace gbl {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t x) {
  // splitmix64 finalizer
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng::result_type CounterRng::at(std::uint64_t index) const {
  return mix(key_ + (index + 1) * kGolden);
}

CounterRng CounterRng::substream(std::string_view name) const {
  return CounterRng(mix(key_ ^ mix(fnv1a(name))));
}

CounterRng CounterRng::substream(std::uint64_t id) const {
  return CounterRng(mix(mix(key_ + kGolden) ^ mix(id + 0x5851F42D4C957F2DULL)));
}

CounterRng make_rng(std::uint64_t seed) { return CounterRng(CounterRng::mix(seed ^ 0x6A09E667F3BCC909ULL)); }

}  // namespace gbl
