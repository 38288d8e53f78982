#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "commlab/bits.hpp"
#include "commlab/rng.hpp"
#include "commlab/transcript.hpp"

namespace commlab {

// Thrown when a run exceeds its bit budget; the runner catches it and
// substitutes a coin-flip output.
struct AbortRun {};

// Per-run randomness.  pub is visible to both parties; priv_a/priv_b are not.
// All three are derived from one master seed so runs replay exactly.
struct RunCtx {
  PublicCoin pub;
  Rng priv_a;
  Rng priv_b;

  static RunCtx from_seed(uint64_t seed) {
    Rng root(seed);
    return RunCtx{root.derive(0x7075626cULL), root.derive(0x616c6963ULL), root.derive(0x626f6221ULL)};
  }
};

// Transcript under a hard bit cap.  cap = 0 means unlimited.
class ProtoIO {
 public:
  explicit ProtoIO(uint64_t cap = 0) : cap_(cap) {}

  void send_bit(Party who, bool b) {
    t_.append_bit(who, b);
    check();
  }
  void send_word(Party who, uint64_t v, uint32_t nbits) {
    t_.append_word(who, v, nbits);
    check();
  }
  void send_elias(Party who, uint64_t v) {
    t_.append_elias(who, v);
    check();
  }

  const Transcript& transcript() const { return t_; }
  Transcript take() { return std::move(t_); }
  size_t bits_sent() const { return t_.num_bits(); }
  uint64_t cap() const { return cap_; }

 private:
  void check() {
    if (cap_ && t_.num_bits() > cap_) throw AbortRun{};
  }
  Transcript t_;
  uint64_t cap_;
};

struct RunResult {
  int output = 0;
  Transcript transcript;
  bool aborted = false;
  // Cost charged for the run; equals transcript bits unless the protocol
  // accounts in another unit (e.g. query counts).
  double charged_cost = 0.0;
};

// A protocol is a function of both inputs plus run randomness; the
// implementation simulates the two parties honestly against the transcript.
struct NamedProtocol {
  std::string name;
  uint32_t n = 0;
  std::function<RunResult(const Bits& x, const Bits& y, RunCtx& ctx, uint64_t bit_cap)> run;
};

}  // namespace commlab
