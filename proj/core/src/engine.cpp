#include "commlab/engine.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "commlab/stats.hpp"

namespace commlab::engine {

namespace {

constexpr uint64_t kBlock = 256;  // trials per reduction block

struct TrialOutcome {
  bool error;
  bool aborted;
  uint64_t bits;
  double cost;
  uint32_t rounds;
};

TrialOutcome one_trial(const NamedProtocol& p, const dist::BipartiteDist& d, const Fn& fn,
                       uint64_t master_seed, uint64_t trial, uint64_t bit_cap) {
  const uint64_t trial_seed = mix64(master_seed ^ mix64(trial + 0x51ed270b));
  Rng sample_rng = Rng(trial_seed).derive(0xd15);
  auto [x, y] = d->sample(sample_rng);
  const int truth = fn(x, y);
  RunCtx ctx = RunCtx::from_seed(mix64(trial_seed ^ 0xc0117e57));
  TrialOutcome out{};
  try {
    RunResult r = p.run(x, y, ctx, bit_cap);
    out.error = r.output != truth;
    out.aborted = r.aborted;
    out.bits = r.transcript.num_bits();
    out.cost = r.charged_cost > 0 ? r.charged_cost : static_cast<double>(out.bits);
    out.rounds = r.transcript.rounds();
  } catch (const AbortRun&) {
    const int guess = Rng(trial_seed).derive(0xab0).next_bit() ? 1 : 0;
    out.error = guess != truth;
    out.aborted = true;
    out.bits = bit_cap;
    out.cost = static_cast<double>(bit_cap);
    out.rounds = 0;
  }
  return out;
}

struct BlockSums {
  uint64_t errors = 0;
  uint64_t aborts = 0;
  uint64_t bits = 0;
  uint64_t max_bits = 0;
  double cost = 0;
  double max_cost = 0;
  uint64_t rounds = 0;
  uint32_t max_rounds = 0;
};

}  // namespace

RunResult run_protocol(const NamedProtocol& p, const Bits& x, const Bits& y, uint64_t seed,
                       uint64_t bit_cap) {
  RunCtx ctx = RunCtx::from_seed(seed);
  try {
    return p.run(x, y, ctx, bit_cap);
  } catch (const AbortRun&) {
    RunResult r;
    r.aborted = true;
    r.output = Rng(seed).derive(0xab0).next_bit() ? 1 : 0;
    r.charged_cost = static_cast<double>(bit_cap);
    return r;
  }
}

McStats monte_carlo(const NamedProtocol& p, const dist::BipartiteDist& d, const Fn& fn,
                    const McConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("monte_carlo: zero trials");
  const uint64_t nblocks = (cfg.trials + kBlock - 1) / kBlock;
  std::vector<BlockSums> partial(nblocks);

  unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<uint64_t>(workers, nblocks));

  std::atomic<uint64_t> next_block{0};
  auto work = [&] {
    while (true) {
      const uint64_t b = next_block.fetch_add(1);
      if (b >= nblocks) return;
      BlockSums s;
      const uint64_t lo = b * kBlock;
      const uint64_t hi = std::min(cfg.trials, lo + kBlock);
      for (uint64_t t = lo; t < hi; ++t) {
        TrialOutcome o = one_trial(p, d, fn, cfg.seed, t, cfg.bit_cap);
        s.errors += o.error;
        s.aborts += o.aborted;
        s.bits += o.bits;
        s.max_bits = std::max(s.max_bits, o.bits);
        s.cost += o.cost;
        s.max_cost = std::max(s.max_cost, o.cost);
        s.rounds += o.rounds;
        s.max_rounds = std::max(s.max_rounds, o.rounds);
      }
      partial[b] = s;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Fixed block order keeps the floating-point reduction worker-invariant.
  McStats st;
  st.trials = cfg.trials;
  uint64_t bits_total = 0, rounds_total = 0;
  double cost_total = 0;
  for (const BlockSums& s : partial) {
    st.errors += s.errors;
    st.aborts += s.aborts;
    bits_total += s.bits;
    st.max_bits = std::max(st.max_bits, s.max_bits);
    cost_total += s.cost;
    st.max_cost = std::max(st.max_cost, s.max_cost);
    rounds_total += s.rounds;
    st.max_rounds = std::max(st.max_rounds, s.max_rounds);
  }
  const double n = static_cast<double>(cfg.trials);
  st.mean_error = static_cast<double>(st.errors) / n;
  st.mean_bits = static_cast<double>(bits_total) / n;
  st.mean_cost = cost_total / n;
  st.mean_rounds = static_cast<double>(rounds_total) / n;
  std::tie(st.err_lo, st.err_hi) = stats::wilson_interval(st.errors, cfg.trials);
  return st;
}

}  // namespace commlab::engine
