#pragma once

#include <cstdint>

namespace skewlab {

// Counter-based deterministic random source. value_at(seed, stream, counter)
// is a pure function, so any draw can be reproduced from coordinates alone:
// no hidden state, no draw-order coupling between consumers. Each consumer
// takes its own stream id and indexes draws by counter.
//
// The mixer is splitmix64 (Steele, Lea, Flood 2014), applied to a fixed-odd
// combination of the three coordinates. Statistical quality is more than
// enough for Monte Carlo starts and rejection sampling; cryptographic
// strength is a non-goal.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t counter) {
    // Distinct odd multipliers decorrelate the coordinates before mixing.
    std::uint64_t x = seed;
    x += 0x9e3779b97f4a7c15ull * (stream + 1);
    x += 0xbf58476d1ce4e5b9ull * counter;
    return mix(x);
  }

  std::uint64_t at(std::uint64_t counter) const {
    return value_at(seed_, stream_, counter);
  }

  // Next value from the internal counter (convenience for sequential use).
  std::uint64_t next() { return at(counter_++); }

  // Uniform draw from [0,1) with 53 random bits, suitable for double math.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace skewlab
