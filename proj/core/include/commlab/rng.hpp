#pragma once

#include <bit>
#include <cstdint>

#include "commlab/errors.hpp"

namespace commlab {

// Finalizer from splitmix64; bijective on uint64.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based splitmix64 stream.  word(i) is pure in (key, i), so the same
// stream can be replayed from any point — protocols that re-simulate a peer's
// sampling against identical coins rely on this.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)), cursor_(0) {}

  uint64_t word(uint64_t i) const { return mix64(key_ + (i + 1) * 0x9e3779b97f4a7c15ULL); }

  uint64_t next() { return word(cursor_++); }
  bool next_bit() { return next() & 1; }
  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0,m); unbiased via masked rejection.
  uint64_t next_below(uint64_t m) {
    if (m == 0) throw ConfigError("next_below: m must be positive");
    if (m == 1) return 0;
    const int bits = std::bit_width(m - 1);
    const uint64_t mask = bits >= 64 ? ~uint64_t(0) : ((uint64_t(1) << bits) - 1);
    while (true) {
      uint64_t r = next() & mask;
      if (r < m) return r;
    }
  }

  // Independent stream keyed off this one; deterministic in (key, tag).
  Rng derive(uint64_t tag) const {
    Rng r(0);
    r.key_ = mix64(key_ ^ mix64(tag ^ 0xd1b54a32d192ed03ULL));
    r.cursor_ = 0;
    return r;
  }

  uint64_t cursor() const { return cursor_; }
  void seek(uint64_t c) { cursor_ = c; }

 private:
  uint64_t key_;
  uint64_t cursor_;
};

// Shared randomness visible to both parties of a protocol.
using PublicCoin = Rng;

}  // namespace commlab
