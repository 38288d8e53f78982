#include "commlab/sparse_fn.hpp"

#include <algorithm>
#include <cmath>

namespace commlab::sparse {

SparseFn::SparseFn(uint32_t n, uint32_t d, uint64_t seed) : n_(n), d_(d), seed_(seed), ones_(0) {
  if (n_ < 1 || n_ > 16) throw ConfigError("SparseFn: need 1 <= n <= 16");
  const uint64_t side = uint64_t(1) << n_;
  const double p = static_cast<double>(d_) / static_cast<double>(side);
  if (p > 1.0) throw ConfigError("SparseFn: density d/2^n exceeds 1");
  rows_.resize(side);
  if (p <= 0.0) return;
  Rng rng = Rng(seed_).derive(0x5f5e100d);
  const double log1mp = std::log1p(-p);
  const uint64_t cells = side * side;
  int64_t i = -1;
  while (true) {
    const double u = (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;
    const double skip = std::floor(std::log(u) / log1mp);
    i += 1 + static_cast<int64_t>(std::min(skip, 1.0e18));
    if (i < 0 || static_cast<uint64_t>(i) >= cells) break;
    rows_[static_cast<uint64_t>(i) >> n_].push_back(
        static_cast<uint32_t>(static_cast<uint64_t>(i) & (side - 1)));
    ++ones_;
  }
}

int SparseFn::eval(uint64_t x, uint64_t y) const {
  const auto& r = rows_[x];
  return std::binary_search(r.begin(), r.end(), static_cast<uint32_t>(y)) ? 1 : 0;
}

Fn as_fn(std::shared_ptr<const SparseFn> F) {
  const uint32_t n = F->n();
  return Fn::custom(n, "sparse_fn", [F](const Bits& x, const Bits& y) {
    return F->eval(x.low64(), y.low64());
  });
}

SparseHardImpl::SparseHardImpl(std::shared_ptr<const SparseFn> F) : F_(std::move(F)) {
  if (!F_) throw ConfigError("SparseHardImpl: null function");
  const uint64_t side = F_->side();
  ones_ = F_->ones();
  zeros_ = side * side - ones_;
  if (ones_ == 0 || zeros_ == 0)
    throw ConfigError("SparseHardImpl: function must have both 0-cells and 1-cells");
  row_cum_ones_.resize(side + 1, 0);
  for (uint64_t r = 0; r < side; ++r)
    row_cum_ones_[r + 1] = row_cum_ones_[r] + F_->row(r).size();
}

uint32_t SparseHardImpl::n() const { return F_->n(); }

double SparseHardImpl::mass(const Bits& x, const Bits& y) const {
  return F_->eval(x.low64(), y.low64()) ? 0.5 / static_cast<double>(ones_)
                                        : 0.5 / static_cast<double>(zeros_);
}

std::pair<Bits, Bits> SparseHardImpl::sample(Rng& rng) const {
  const uint32_t nn = F_->n();
  const uint64_t side = F_->side();
  if (rng.next_bit()) {
    // uniform 1-cell via the row cumulative
    const uint64_t t = rng.next_below(ones_);
    const auto it = std::upper_bound(row_cum_ones_.begin(), row_cum_ones_.end(), t);
    const uint64_t r = static_cast<uint64_t>(it - row_cum_ones_.begin()) - 1;
    const uint32_t c = F_->row(r)[t - row_cum_ones_[r]];
    return {Bits::from_low64(nn, r), Bits::from_low64(nn, c)};
  }
  // uniform 0-cell by rejection; acceptance ~ 1 - density
  while (true) {
    const uint64_t r = rng.next_below(side);
    const uint64_t c = rng.next_below(side);
    if (!F_->eval(r, c)) return {Bits::from_low64(nn, r), Bits::from_low64(nn, c)};
  }
}

uint64_t SparseHardImpl::support_size() const { return ones_ + zeros_; }

void SparseHardImpl::for_each_support(const dist::SupportVisitor& f) const {
  const uint32_t nn = F_->n();
  const uint64_t side = F_->side();
  const double m1 = 0.5 / static_cast<double>(ones_);
  const double m0 = 0.5 / static_cast<double>(zeros_);
  for (uint64_t r = 0; r < side; ++r) {
    const Bits x = Bits::from_low64(nn, r);
    const auto& row = F_->row(r);
    size_t ri = 0;
    for (uint64_t c = 0; c < side; ++c) {
      const bool one = ri < row.size() && row[ri] == c;
      if (one) ++ri;
      f(x, Bits::from_low64(nn, c), one ? m1 : m0);
    }
  }
}

dist::Marginal SparseHardImpl::marginal_a() const {
  const uint32_t nn = F_->n();
  const uint64_t side = F_->side();
  std::vector<std::pair<Bits, double>> supp;
  supp.reserve(side);
  for (uint64_t r = 0; r < side; ++r) {
    const double ones_r = static_cast<double>(F_->row(r).size());
    const double m = 0.5 * ones_r / static_cast<double>(ones_) +
                     0.5 * (static_cast<double>(side) - ones_r) / static_cast<double>(zeros_);
    supp.emplace_back(Bits::from_low64(nn, r), m);
  }
  return std::make_shared<dist::EnumerableMarginal>(nn, std::move(supp));
}

dist::Marginal SparseHardImpl::marginal_b() const {
  const uint32_t nn = F_->n();
  const uint64_t side = F_->side();
  std::vector<uint64_t> col_ones(side, 0);
  for (uint64_t r = 0; r < side; ++r)
    for (uint32_t c : F_->row(r)) ++col_ones[c];
  std::vector<std::pair<Bits, double>> supp;
  supp.reserve(side);
  for (uint64_t c = 0; c < side; ++c) {
    const double m = 0.5 * static_cast<double>(col_ones[c]) / static_cast<double>(ones_) +
                     0.5 * (static_cast<double>(side) - static_cast<double>(col_ones[c])) /
                         static_cast<double>(zeros_);
    supp.emplace_back(Bits::from_low64(nn, c), m);
  }
  return std::make_shared<dist::EnumerableMarginal>(nn, std::move(supp));
}

std::string SparseHardImpl::describe() const {
  return "sparse_hard(n=" + std::to_string(F_->n()) + ",d=" + std::to_string(F_->d()) +
         ",seed=" + std::to_string(F_->seed()) + ")";
}

dist::BipartiteDist make_sparse_hard(std::shared_ptr<const SparseFn> F) {
  return std::make_shared<SparseHardImpl>(std::move(F));
}

}  // namespace commlab::sparse
