#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commlab/dist.hpp"
#include "commlab/problem.hpp"
#include "commlab/protocol.hpp"

namespace commlab::engine {

// One execution with all randomness derived from seed.  AbortRun is caught
// here: the result carries aborted=true, a coin-flip output, and cost equal
// to the cap.
RunResult run_protocol(const NamedProtocol& p, const Bits& x, const Bits& y, uint64_t seed,
                       uint64_t bit_cap = 0);

struct McConfig {
  uint64_t trials = 1000;
  uint64_t seed = 1;
  int workers = 0;       // 0 = hardware concurrency
  uint64_t bit_cap = 0;  // 0 = unlimited
};

struct McStats {
  uint64_t trials = 0;
  uint64_t errors = 0;
  double mean_error = 0.0;
  double err_lo = 0.0, err_hi = 0.0;  // Wilson 95%
  double mean_bits = 0.0;
  uint64_t max_bits = 0;
  double mean_cost = 0.0;
  double max_cost = 0.0;
  double mean_rounds = 0.0;
  uint32_t max_rounds = 0;
  uint64_t aborts = 0;
};

// Monte Carlo estimate of error/cost under dist.  Per-trial seeds are pure
// in (cfg.seed, trial index) and partial sums reduce in fixed block order,
// so results do not depend on the worker count.
McStats monte_carlo(const NamedProtocol& p, const dist::BipartiteDist& d, const Fn& fn,
                    const McConfig& cfg);

}  // namespace commlab::engine
