#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "commlab/dist.hpp"
#include "commlab/problem.hpp"

namespace commlab::sparse {

// Random function on [2^n] x [2^n] with each cell independently 1 with
// probability d/2^n.  Generated by geometric skips over the flat cell index,
// so construction is O(#ones).  Rows keep sorted column lists.
class SparseFn {
 public:
  SparseFn(uint32_t n, uint32_t d, uint64_t seed);

  uint32_t n() const { return n_; }
  uint32_t d() const { return d_; }
  uint64_t seed() const { return seed_; }
  uint64_t side() const { return uint64_t(1) << n_; }
  uint64_t ones() const { return ones_; }
  double density() const {
    return static_cast<double>(ones_) / (static_cast<double>(side()) * static_cast<double>(side()));
  }

  int eval(uint64_t x, uint64_t y) const;
  const std::vector<uint32_t>& row(uint64_t x) const { return rows_[x]; }

 private:
  uint32_t n_, d_;
  uint64_t seed_;
  std::vector<std::vector<uint32_t>> rows_;
  uint64_t ones_;
};

// Inputs as n-bit strings (low bits of Bits).
Fn as_fn(std::shared_ptr<const SparseFn> F);

// Half the probability mass uniform on the 1-cells of F, half uniform on the
// 0-cells.  Marginals are enumerable (2^n rows); the full support streams.
class SparseHardImpl : public dist::DistImpl {
 public:
  explicit SparseHardImpl(std::shared_ptr<const SparseFn> F);

  uint32_t n() const override;
  double mass(const Bits& x, const Bits& y) const override;
  std::pair<Bits, Bits> sample(Rng& rng) const override;
  bool enumerable() const override { return true; }
  uint64_t support_size() const override;
  void for_each_support(const dist::SupportVisitor& f) const override;
  dist::Marginal marginal_a() const override;
  dist::Marginal marginal_b() const override;
  std::string describe() const override;

  const std::shared_ptr<const SparseFn>& fn() const { return F_; }

 private:
  std::shared_ptr<const SparseFn> F_;
  uint64_t ones_, zeros_;
  std::vector<uint64_t> row_cum_ones_;  // size 2^n + 1
};

dist::BipartiteDist make_sparse_hard(std::shared_ptr<const SparseFn> F);

}  // namespace commlab::sparse
