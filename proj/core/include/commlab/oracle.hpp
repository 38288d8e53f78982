#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "commlab/dist.hpp"

namespace commlab::oracle {

// Explicit 0/1 matrix with integer cell weights; the ground-truth engine
// works in exact integer arithmetic, so masses enter as weights over an
// implicit common denominator (their total).
struct TinyProblem {
  int rows = 0, cols = 0;
  std::array<std::array<int, 8>, 8> value{};
  std::array<std::array<uint64_t, 8>, 8> weight{};

  static TinyProblem uniform(const std::vector<std::string>& matrix);  // "01", "10", ...
  static TinyProblem weighted(const std::vector<std::string>& matrix,
                              const std::vector<std::vector<uint64_t>>& weights);
  uint64_t total_weight() const;
};

// Who turns the final rectangle into an answer.
//   receiver_local: some party announces the answer knowing its own input
//     and the transcript (per-row / per-column majority inside the leaf).
//   rectangle_label: the answer is a function of the transcript alone
//     (constant on the leaf).
enum class OutputMode { receiver_local, rectangle_label };

// Minimal worst-case protocol-tree depth over all deterministic protocols,
// by memoised recursion over sub-rectangles; every (rowmask, colmask)
// carries its full depth -> least-error frontier.  Immutable after
// construction; queries are read-only and parallel-safe.
class DccOracle {
 public:
  DccOracle(TinyProblem p, OutputMode mode);

  // least achievable error weight at each depth 0..max_depth()
  const std::vector<uint64_t>& errors_by_depth(uint8_t rowmask, uint8_t colmask) const;

  // Pareto points (depth, error weight): strictly decreasing error
  std::vector<std::pair<int, uint64_t>> frontier(uint8_t rowmask, uint8_t colmask) const;

  // min depth with error <= eps_num/eps_den of the total weight
  int min_depth(uint64_t eps_num, uint64_t eps_den) const;

  int max_depth() const { return max_depth_; }
  OutputMode mode() const { return mode_; }
  const TinyProblem& problem() const { return p_; }

 private:
  uint64_t leaf_error(uint8_t rowmask, uint8_t colmask) const;

  TinyProblem p_;
  OutputMode mode_;
  int max_depth_;
  std::vector<std::vector<uint64_t>> memo_;  // [rowmask*256+colmask][depth]
};

int exact_dcc(const TinyProblem& p, uint64_t eps_num, uint64_t eps_den,
              OutputMode mode = OutputMode::receiver_local);

// Row-counting bound: with a proportion p of ones and any r in (0,p) with
// r|Y| integral, more than r|Y| ones appear in at least (p-r)/(1-r)|X| rows.
// All comparisons exact in integers.
struct ColouringReport {
  uint64_t heavy_rows = 0;
  double bound = 0;    // (p-r)/(1-r)|X|
  double p = 0;        // realized 1-fraction
  bool holds = false;
  bool hypothesis_ok = true;
  std::string note;
};
ColouringReport colouring_check(const std::vector<std::vector<int>>& colouring, uint64_t r_num,
                                uint64_t r_den);

// Exact mutual information of the hard family against its closed form.
struct InfoCheck {
  double exact = 0;
  double closed_form = 0;
  bool within_budget = false;  // exact <= k
};
// full-support summation; support pairs capped at 10^7
InfoCheck razborov_info_exact(uint32_t n, double k);
// same value through the two-orbit collapse (uniform marginals make the
// log-ratio constant per orbit), O(1) for any n
InfoCheck razborov_info_orbit(uint32_t n, double k);

// Exact mass comparison when both sides enumerate; optional two-sample
// chi-square when samples > 0 (the only route when a side cannot enumerate).
struct EquivalenceReport {
  double max_mass_diff = 0;  // NaN when exact comparison is unavailable
  double p_value = 0;        // NaN when no sampling was requested
  uint64_t samples = 0;
};
EquivalenceReport sampler_equivalence(const dist::BipartiteDist& a, const dist::BipartiteDist& b,
                                      uint64_t samples = 0, uint64_t seed = 1);

}  // namespace commlab::oracle
