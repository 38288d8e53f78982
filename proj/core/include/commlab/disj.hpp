#pragma once

#include <functional>
#include <vector>

#include "commlab/dist.hpp"
#include "commlab/protocol.hpp"

namespace commlab::disj {

// One-way equality test: Alice sends k parities of her input against
// public-coin strings, Bob compares with his own.  Output 1 = equal.
// Never rejects equal inputs; unequal inputs pass with probability 2^-k.
NamedProtocol fingerprint_equality(uint32_t k);

// Correlated-sample transmission over a shared finite support.  The sender
// holds `target` (index masses), both parties know `base`; candidates are
// drawn from base on the public coin and the sender announces the
// self-delimited rank of the accepted one.  The announced index is
// distributed exactly per target; expected bits track
// D(target||base) + 2 log2(D+2) + O(1).
struct TransmitResult {
  size_t index = 0;   // accepted support index
  uint64_t rank = 0;  // 1-based candidate rank that went on the wire
};
TransmitResult hjmr_transmit(const std::vector<double>& target, const std::vector<double>& base,
                             RunCtx& ctx, ProtoIO& io, Party sender,
                             uint64_t step_cap = uint64_t(1) << 20);

// Small-set disjointness: the party whose turn it is either compresses the
// opponent's set (announcing the rank of the first public random subset
// covering its own) or, once small, sends it verbatim under a public random
// element-naming map.  Worst-case error <= eps on every input; expected bits
// linear in s plus log(1/eps) terms.  Inputs larger than s are rejected.
// Output 1 = disjoint.
NamedProtocol smallset_disj(uint32_t s, double eps);

// Live view of a universe-shrinking run, reported after each completed
// phase-1 iteration and once more before phase 2.  rows/cols and the
// conditioned distribution are filled only for enumerable inputs (and the
// latter only while the surviving support stays small).
struct PhaseState {
  Bits universe;
  std::vector<Bits> rows, cols;
  dist::BipartiteDist conditioned;
  uint32_t draws = 0;
};
// Observers run on the thread executing the run; attach only to
// single-threaded experiments.
using PhaseObserver = std::function<void(const PhaseState&)>;

// Two-phase DISJ for product inputs: public-coin candidate scans shrink the
// universe by >= ceil(sqrt(n)) per completed iteration, then small-set
// disjointness finishes on the remnant.  Distributional error <= eps; a
// built-in transcript cap of 6*ceil(sqrt(n))*(1+log2(1/eps)) bits converts
// the run to a coin flip when exceeded.  Output 1 = disjoint.
NamedProtocol disj_product(const dist::BipartiteDist& mu, double eps, PhaseObserver obs = nullptr);

enum class RoundsMode { unbounded, two_round, log_star };

struct BoundedInfoProtocol {
  NamedProtocol protocol;
  double info = 0;           // I(X:Y) of mu, computed at build time
  double budget = 0;         // the declared k
  bool within_budget = true; // info <= k; the protocol runs either way
};

// Two-phase DISJ for correlated inputs with information budget k.  Phase 1
// transmits transcript-conditioned disjoint samples (hjmr_transmit for
// enumerable inputs, candidate scans for products) until both sets fit in
// S = ceil(sqrt((k+1)n)); phase 2 is small-set disjointness at eps/2.
// two_round: Alice streams the whole shrink solo, Bob answers once with the
// decisive iteration and his set.  log_star: the solo stream, then the
// interactive small-set finish.  Worst-case bits are capped at a multiple of
// the expected budget; beyond it the run turns into a coin flip.
BoundedInfoProtocol disj_bounded_info(const dist::BipartiteDist& mu, double k, double eps,
                                      RoundsMode mode = RoundsMode::unbounded,
                                      PhaseObserver obs = nullptr);

}  // namespace commlab::disj
