#pragma once

#include <cstdint>

namespace bclab {

// Counter-based splittable generator. Every output is a pure function of
// (seed, stream, counter), so parallel substreams are reproducible and
// independent of scheduling. The mixer is the splitmix64 finalizer.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t key = mix64(seed + kGolden * (stream + 1));
  return mix64(key + kGolden * (counter + 1));
}

// Uniform double in [0,1) from the top 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return to_unit(at(seed, stream, counter));
}

// Sequential view over one (seed, stream) pair.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return at(seed_, stream_, counter_++); }
  double next_unit() { return to_unit(next_u64()); }
  // +1 or -1 with equal probability.
  int next_sign() { return (next_u64() & 1) ? 1 : -1; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace rng
}  // namespace bclab
