#include "doctest.h"

#include <cmath>

#include "commlab/engine.hpp"
#include "commlab/razborov.hpp"
#include "commlab/stats.hpp"

using namespace commlab;

namespace {

// Alice ships her whole set; Bob answers with the verdict bit.
NamedProtocol naive_disj(uint32_t n) {
  return NamedProtocol{"naive", n,
                       [n](const Bits& x, const Bits& y, RunCtx&, uint64_t cap) {
                         ProtoIO io(cap);
                         io.send_word(Party::Alice, x.low64(), n);
                         const bool disj = x.disjoint_from(y);
                         io.send_bit(Party::Bob, disj);
                         RunResult r;
                         r.output = disj ? 1 : 0;
                         r.transcript = io.take();
                         return r;
                       }};
}

}  // namespace

TEST_CASE("run_protocol is deterministic in the seed") {
  auto p = naive_disj(15);
  Bits x(15, {1, 2, 3});
  Bits y(15, {4, 5, 6});
  auto r1 = engine::run_protocol(p, x, y, 99);
  auto r2 = engine::run_protocol(p, x, y, 99);
  CHECK(r1.output == 1);
  CHECK(r1.transcript.num_bits() == r2.transcript.num_bits());
  CHECK(r1.transcript.num_bits() == 16);
  CHECK(r1.transcript.rounds() == 2);
  CHECK(!r1.aborted);
}

TEST_CASE("bit cap aborts the run") {
  auto p = naive_disj(15);
  Bits x(15, {1});
  Bits y(15, {1});
  auto r = engine::run_protocol(p, x, y, 5, /*bit_cap=*/8);
  CHECK(r.aborted);
  CHECK(r.charged_cost == 8.0);
}

TEST_CASE("monte_carlo on an exact protocol reports zero error") {
  auto mu = dist::make_mu(15, 3);
  auto p = naive_disj(15);
  engine::McConfig cfg;
  cfg.trials = 2000;
  cfg.seed = 5;
  auto st = engine::monte_carlo(p, mu, Fn::disj(15), cfg);
  CHECK(st.errors == 0);
  CHECK(st.mean_bits == 16.0);
  CHECK(st.max_bits == 16);
  CHECK(st.max_rounds == 2);
  CHECK(st.err_hi < 0.01);
}

TEST_CASE("monte_carlo result does not depend on worker count") {
  auto mu = dist::make_mu(15, 3);
  auto p = naive_disj(15);
  engine::McConfig c1, c4;
  c1.trials = c4.trials = 3000;
  c1.seed = c4.seed = 77;
  c1.workers = 1;
  c4.workers = 4;
  auto s1 = engine::monte_carlo(p, mu, Fn::disj(15), c1);
  auto s4 = engine::monte_carlo(p, mu, Fn::disj(15), c4);
  CHECK(s1.errors == s4.errors);
  CHECK(s1.mean_bits == s4.mean_bits);
  CHECK(s1.mean_error == s4.mean_error);
  CHECK(s1.max_rounds == s4.max_rounds);
}

TEST_CASE("monte_carlo error rate matches a known-noise protocol") {
  // Outputs the truth except with probability 1/8 (decided by private coins).
  NamedProtocol noisy{"noisy", 15,
                      [](const Bits& x, const Bits& y, RunCtx& ctx, uint64_t cap) {
                        ProtoIO io(cap);
                        const bool disj = x.disjoint_from(y);
                        io.send_bit(Party::Alice, disj);
                        bool flip = ctx.priv_a.next_below(8) == 0;
                        RunResult r;
                        r.output = (disj ^ flip) ? 1 : 0;
                        r.transcript = io.take();
                        return r;
                      }};
  auto mu = dist::make_mu(15, 3);
  engine::McConfig cfg;
  cfg.trials = 20000;
  cfg.seed = 3;
  auto st = engine::monte_carlo(noisy, mu, Fn::disj(15), cfg);
  CHECK(st.mean_error == doctest::Approx(0.125).epsilon(0.12));
  CHECK(st.err_lo < 0.125);
  CHECK(st.err_hi > 0.125);
}

TEST_CASE("wilson interval brackets the point estimate") {
  auto [lo, hi] = stats::wilson_interval(10, 100);
  CHECK(lo > 0.04);
  CHECK(lo < 0.10);
  CHECK(hi > 0.10);
  CHECK(hi < 0.19);
  auto [zlo, zhi] = stats::wilson_interval(0, 100);
  CHECK(zlo == 0.0);
  CHECK(zhi > 0.0);
  CHECK(zhi < 0.05);
}

TEST_CASE("fit_exponent recovers a power law") {
  std::vector<double> xs = {16, 32, 64, 128, 256};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.5 * std::pow(x, 0.5));
  CHECK(stats::fit_exponent(xs, ys) == doctest::Approx(0.5).epsilon(1e-9));
  for (auto& y : ys) y *= 2;  // scale does not change the slope
  CHECK(stats::fit_exponent(xs, ys) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("stats helpers") {
  CHECK(stats::choose_u64(15, 3) == 455);
  CHECK(stats::choose_u64(15, 0) == 1);
  CHECK(stats::choose_u64(3, 15) == 0);
  CHECK(stats::choose_u64(52, 5) == 2598960);
  CHECK(stats::log2_choose(15, 3) == doctest::Approx(std::log2(455.0)).epsilon(1e-12));
  CHECK(stats::binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(stats::binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK(stats::binary_entropy(0.0) == 0.0);
  // chi-square tail: P[X2 > 3.84 | dof=1] ~ 0.05
  CHECK(stats::chi_square_pvalue(3.841, 1) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(stats::chi_square_pvalue(0.0, 5) == 1.0);
  CHECK(stats::gamma_p(2.0, 100.0) == doctest::Approx(1.0));
}
