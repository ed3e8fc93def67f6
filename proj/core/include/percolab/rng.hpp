#pragma once

#include <array>
#include <cstdint>

namespace percolab {

// Philox4x32-10 (Salmon et al., SC'11): a keyed bijection on 128-bit
// counters. Every random quantity in the library is a pure function of
// (key, counter), so results do not depend on thread scheduling.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

inline Philox4x32::Key philox_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Uniform double in [0, 1) from the top 53 bits of two words.
inline double unit_double(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (std::uint64_t{lo} >> 11);
  return static_cast<double>(bits & ((std::uint64_t{1} << 53) - 1)) * 0x1.0p-53;
}

// The edge variate for (seed, sample, slot): one draw per coordinate, shared
// by every p so that open sets are nested in p.
inline double edge_variate(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  const auto out = Philox4x32::block(
      {static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32),
       static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32)},
      philox_key(seed));
  return unit_double(out[0], out[1]);
}

// Sequential stream over one Philox key, for searches that consume an
// unpredictable number of variates. Two 64-bit outputs per block.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_(philox_key(seed)), stream_(stream) {}

  std::uint64_t next_u64() {
    if (!have_) {
      buf_ = Philox4x32::block(
          {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
          key_);
      ++counter_;
      have_ = 2;
    }
    --have_;
    const std::size_t i = have_ == 1 ? 0 : 2;
    return (std::uint64_t{buf_[i]} << 32) | buf_[i + 1];
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} - n + 1) % n;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= limit) return x % n;
    }
  }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Philox4x32::Counter buf_{};
  int have_ = 0;
};

}  // namespace percolab
