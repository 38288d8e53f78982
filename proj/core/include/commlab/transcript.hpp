#pragma once

#include <cstdint>
#include <vector>

#include "commlab/elias.hpp"
#include "commlab/errors.hpp"

namespace commlab {

enum class Party : uint8_t { Alice = 0, Bob = 1 };

inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

// Bit-level record of one protocol execution.  A round is a maximal run of
// bits by one speaker; rounds() is 1 for a transcript with a single speaker.
class Transcript {
 public:
  void append_bit(Party who, bool b) {
    bits_.push_back(b ? 1 : 0);
    speakers_.push_back(static_cast<uint8_t>(who));
  }

  // Low nbits of v, most significant first.
  void append_word(Party who, uint64_t v, uint32_t nbits) {
    for (int i = static_cast<int>(nbits) - 1; i >= 0; --i)
      append_bit(who, (v >> i) & 1);
  }

  void append_elias(Party who, uint64_t v) {
    for (uint8_t b : elias_delta_bits(v)) append_bit(who, b != 0);
  }

  size_t num_bits() const { return bits_.size(); }

  uint32_t rounds() const {
    uint32_t r = 1;
    for (size_t i = 1; i < speakers_.size(); ++i)
      if (speakers_[i] != speakers_[i - 1]) ++r;
    return r;
  }

  const std::vector<uint8_t>& bits() const { return bits_; }
  const std::vector<uint8_t>& speakers() const { return speakers_; }

  uint8_t bit(size_t i) const { return bits_[i]; }

 private:
  std::vector<uint8_t> bits_;      // 0/1
  std::vector<uint8_t> speakers_;  // Party per bit
};

// Sequential reader used by the listening party.
class TranscriptReader {
 public:
  explicit TranscriptReader(const Transcript& t) : t_(t), pos_(0) {}

  bool read_bit() {
    if (pos_ >= t_.num_bits()) throw Error("transcript read past end");
    return t_.bit(pos_++) != 0;
  }

  uint64_t read_word(uint32_t nbits) {
    uint64_t v = 0;
    for (uint32_t i = 0; i < nbits; ++i) v = (v << 1) | (read_bit() ? 1 : 0);
    return v;
  }

  uint64_t read_elias() {
    size_t p = pos_;
    uint64_t v = elias_delta_read(t_.bits().data(), t_.num_bits(), p);
    pos_ = p;
    return v;
  }

  size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == t_.num_bits(); }

 private:
  const Transcript& t_;
  size_t pos_;
};

}  // namespace commlab
