#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "commlab/errors.hpp"

namespace commlab {

// Self-delimiting code for v >= 0 (delta code applied to v+1).
// Length = N + 2*floor(log2(N+1)) + 1 where N = floor(log2(v+1));
// e.g. v=0 -> 1 bit, v=1000 -> 16 bits.
inline uint32_t elias_delta_length(uint64_t v) {
  const uint64_t x = v + 1;
  const uint32_t N = static_cast<uint32_t>(std::bit_width(x)) - 1;
  const uint32_t L = static_cast<uint32_t>(std::bit_width(N + 1)) - 1;
  return N + 2 * L + 1;
}

// Code bits, most significant first: L zeros, N+1 in binary (L+1 bits),
// then the N low bits of x.
inline std::vector<uint8_t> elias_delta_bits(uint64_t v) {
  const uint64_t x = v + 1;
  const uint32_t N = static_cast<uint32_t>(std::bit_width(x)) - 1;
  const uint32_t L = static_cast<uint32_t>(std::bit_width(N + 1)) - 1;
  std::vector<uint8_t> out;
  out.reserve(N + 2 * L + 1);
  for (uint32_t i = 0; i < L; ++i) out.push_back(0);
  for (int i = static_cast<int>(L); i >= 0; --i)
    out.push_back(static_cast<uint8_t>(((N + 1) >> i) & 1));
  for (int i = static_cast<int>(N) - 1; i >= 0; --i)
    out.push_back(static_cast<uint8_t>((x >> i) & 1));
  return out;
}

// Decode starting at bits[pos]; advances pos past the code.
inline uint64_t elias_delta_read(const uint8_t* bits, size_t size, size_t& pos) {
  uint32_t L = 0;
  while (pos < size && bits[pos] == 0) {
    ++L;
    ++pos;
    if (L > 63) throw Error("elias decode: zero run too long");
  }
  uint32_t np1 = 0;
  for (uint32_t i = 0; i <= L; ++i) {
    if (pos >= size) throw Error("elias decode: truncated length field");
    np1 = (np1 << 1) | bits[pos++];
  }
  if (np1 == 0) throw Error("elias decode: bad length field");
  const uint32_t N = np1 - 1;
  uint64_t x = 1;
  for (uint32_t i = 0; i < N; ++i) {
    if (pos >= size) throw Error("elias decode: truncated payload");
    x = (x << 1) | bits[pos++];
  }
  return x - 1;
}

}  // namespace commlab
