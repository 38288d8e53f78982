#pragma once

#include <functional>
#include <string>
#include <vector>

#include "commlab/dist.hpp"

namespace commlab::info {

// Divergences in bits.  finite=false marks a support violation (mu puts mass
// where sigma has none); the witness pair is the first offender found.
struct InfoReport {
  double D = 0;
  double D_inf = 0;
  double I = 0;
  double I_inf = 0;
  bool finite = true;
  Bits witness_x, witness_y;
};

// Exact streaming computation over mu's support.  sigma defaults to the
// product of mu's marginals, which makes D == I and D_inf == I_inf.
InfoReport divergence_suite(const dist::BipartiteDist& mu,
                            const dist::BipartiteDist& sigma = nullptr);

// Drop every support point whose log2(mu / (muA x muB)) exceeds a threshold,
// renormalize.  The threshold is the smallest ratio cut whose dropped mass
// stays <= eps, found by searching the sorted positive log-ratios; guarantees
// checked by tests: TV(mu, mu') <= eps and I_inf(mu') <= 4 (I(mu)+1) / eps.
dist::BipartiteDist substate_truncate(const dist::BipartiteDist& mu, double eps);

struct SubstateReport {
  dist::BipartiteDist out;
  double tv = 0;              // dropped mass, exact
  double threshold_bits = 0;  // log-ratio cut actually used
  double info_in = 0;         // I(mu)
};
SubstateReport substate_truncate_report(const dist::BipartiteDist& mu, double eps);

// Executable inequality checks.  holds compares lhs against rhs with a 1e-9
// slack; hypothesis_ok=false means the instance fails the inequality's
// premises (reported, not an error).
struct LemmaResult {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
  bool hypothesis_ok = true;
  std::string note;
};

using PairPred = std::function<bool(const Bits&, const Bits&)>;

// sum_{E} mu log2(mu/sigma)  >=  max{-1, mu(E) log2(mu(E)/sigma(E))}
LemmaResult lemma_log_sum(const dist::BipartiteDist& mu, const dist::BipartiteDist& sigma,
                          const PairPred& event);

// D(mu|E || sigma) <= (D(mu||sigma)+1)/alpha - log2 alpha, alpha = mu(E)
LemmaResult lemma_restriction(const dist::BipartiteDist& mu, const dist::BipartiteDist& sigma,
                              const PairPred& event);

// Boolean pair, muA(1) muB(1) >= 2 mu(1,1):  I >= muA(1) muB(1) / 5
LemmaResult lemma_depression_half(const dist::BipartiteDist& mu);

// Boolean pair, sigma product, sigmaA(1) sigmaB(1) >= 4 mu(1,1):
//   D(mu||sigma) >= sigma(1,1)/16
LemmaResult lemma_depression_product(const dist::BipartiteDist& mu,
                                     const dist::BipartiteDist& sigma);

// Coin-indexed rectangle partitions: I(X:Y) >= I(X:Y | R, C).
// label must be total on suppA x suppB and constant exactly on rectangles.
struct CoinBranch {
  double weight;
  std::function<uint64_t(const Bits&, const Bits&)> label;
};
LemmaResult lemma_partition_monotone(const dist::BipartiteDist& mu,
                                     const std::vector<CoinBranch>& branches);

// E_c sum_rect P(rect) I(mu | rect): the conditional information a rectangle
// partition family leaves.  Shared by lemma_partition_monotone and tests.
double conditional_info_over_partition(const dist::BipartiteDist& mu,
                                       const std::vector<CoinBranch>& branches);

}  // namespace commlab::info
