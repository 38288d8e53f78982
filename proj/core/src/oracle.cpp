#include "commlab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "commlab/razborov.hpp"
#include "commlab/stats.hpp"

namespace commlab::oracle {

namespace {

constexpr uint64_t kWeightCap = 1'000'000'000'000'000ULL;  // headroom for __int128 products

void validate(const TinyProblem& p) {
  if (p.rows < 1 || p.cols < 1) throw ConfigError("empty matrix");
  if (p.rows > 8 || p.cols > 8) throw TooLargeToEnumerate("matrix larger than 8x8");
  uint64_t total = 0;
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j) {
      if (p.value[i][j] != 0 && p.value[i][j] != 1) throw ConfigError("matrix entries must be 0/1");
      if (p.weight[i][j] > kWeightCap) throw ConfigError("cell weight too large");
      total += p.weight[i][j];
    }
  if (total == 0) throw ConfigError("all weights zero");
}

}  // namespace

TinyProblem TinyProblem::uniform(const std::vector<std::string>& matrix) {
  std::vector<std::vector<uint64_t>> w(matrix.size());
  for (size_t i = 0; i < matrix.size(); ++i) w[i].assign(matrix[i].size(), 1);
  return weighted(matrix, w);
}

TinyProblem TinyProblem::weighted(const std::vector<std::string>& matrix,
                                  const std::vector<std::vector<uint64_t>>& weights) {
  TinyProblem p;
  p.rows = static_cast<int>(matrix.size());
  if (p.rows < 1 || p.rows > 8) throw TooLargeToEnumerate("matrix must have 1..8 rows");
  p.cols = static_cast<int>(matrix[0].size());
  if (weights.size() != matrix.size()) throw ConfigError("weight shape mismatch");
  for (int i = 0; i < p.rows; ++i) {
    if (static_cast<int>(matrix[i].size()) != p.cols) throw ConfigError("ragged matrix");
    if (static_cast<int>(weights[i].size()) != p.cols) throw ConfigError("weight shape mismatch");
    for (int j = 0; j < p.cols; ++j) {
      if (matrix[i][j] != '0' && matrix[i][j] != '1') throw ConfigError("matrix entries must be 0/1");
      p.value[i][j] = matrix[i][j] - '0';
      p.weight[i][j] = weights[i][j];
    }
  }
  validate(p);
  return p;
}

uint64_t TinyProblem::total_weight() const {
  uint64_t total = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) total += weight[i][j];
  return total;
}

uint64_t DccOracle::leaf_error(uint8_t rowmask, uint8_t colmask) const {
  if (mode_ == OutputMode::rectangle_label) {
    uint64_t w[2] = {0, 0};
    for (int i = 0; i < p_.rows; ++i) {
      if (!(rowmask >> i & 1)) continue;
      for (int j = 0; j < p_.cols; ++j)
        if (colmask >> j & 1) w[p_.value[i][j]] += p_.weight[i][j];
    }
    return std::min(w[0], w[1]);
  }
  // receiver_local: the better of "a row player answers" (per-row majority
  // over the leaf's columns) and the column-player mirror image
  uint64_t err_a = 0, err_b = 0;
  for (int i = 0; i < p_.rows; ++i) {
    if (!(rowmask >> i & 1)) continue;
    uint64_t w[2] = {0, 0};
    for (int j = 0; j < p_.cols; ++j)
      if (colmask >> j & 1) w[p_.value[i][j]] += p_.weight[i][j];
    err_a += std::min(w[0], w[1]);
  }
  for (int j = 0; j < p_.cols; ++j) {
    if (!(colmask >> j & 1)) continue;
    uint64_t w[2] = {0, 0};
    for (int i = 0; i < p_.rows; ++i)
      if (rowmask >> i & 1) w[p_.value[i][j]] += p_.weight[i][j];
    err_b += std::min(w[0], w[1]);
  }
  return std::min(err_a, err_b);
}

DccOracle::DccOracle(TinyProblem p, OutputMode mode) : p_(p), mode_(mode) {
  validate(p_);
  max_depth_ = p_.rows + p_.cols - 2;
  memo_.assign(256 * 256, {});

  // every nonempty sub-rectangle, children before parents
  std::vector<std::pair<uint8_t, uint8_t>> order;
  for (uint32_t rm = 1; rm < (uint32_t{1} << p_.rows); ++rm)
    for (uint32_t cm = 1; cm < (uint32_t{1} << p_.cols); ++cm)
      order.emplace_back(static_cast<uint8_t>(rm), static_cast<uint8_t>(cm));
  std::sort(order.begin(), order.end(), [](auto a, auto b) {
    return std::popcount(a.first) + std::popcount(a.second) <
           std::popcount(b.first) + std::popcount(b.second);
  });

  for (auto [rm, cm] : order) {
    auto& f = memo_[size_t{rm} * 256 + cm];
    f.assign(max_depth_ + 1, 0);
    f[0] = leaf_error(rm, cm);
    for (int d = 1; d <= max_depth_; ++d) f[d] = f[d - 1];
    const uint8_t rlow = rm & -rm, clow = cm & -cm;
    for (uint8_t s = (rm - 1) & rm; s; s = (s - 1) & rm) {
      if (!(s & rlow)) continue;  // each unordered bipartition once
      const auto& c1 = memo_[size_t{s} * 256 + cm];
      const auto& c2 = memo_[size_t(rm ^ s) * 256 + cm];
      for (int d = 1; d <= max_depth_; ++d) f[d] = std::min(f[d], c1[d - 1] + c2[d - 1]);
    }
    for (uint8_t s = (cm - 1) & cm; s; s = (s - 1) & cm) {
      if (!(s & clow)) continue;
      const auto& c1 = memo_[size_t{rm} * 256 + s];
      const auto& c2 = memo_[size_t{rm} * 256 + size_t(cm ^ s)];
      for (int d = 1; d <= max_depth_; ++d) f[d] = std::min(f[d], c1[d - 1] + c2[d - 1]);
    }
  }
}

const std::vector<uint64_t>& DccOracle::errors_by_depth(uint8_t rowmask, uint8_t colmask) const {
  const auto& f = memo_[size_t{rowmask} * 256 + colmask];
  if (f.empty()) throw ConfigError("rectangle outside the matrix");
  return f;
}

std::vector<std::pair<int, uint64_t>> DccOracle::frontier(uint8_t rowmask, uint8_t colmask) const {
  const auto& f = errors_by_depth(rowmask, colmask);
  std::vector<std::pair<int, uint64_t>> out{{0, f[0]}};
  for (int d = 1; d < static_cast<int>(f.size()); ++d)
    if (f[d] < out.back().second) out.emplace_back(d, f[d]);
  return out;
}

int DccOracle::min_depth(uint64_t eps_num, uint64_t eps_den) const {
  if (eps_den == 0) throw ConfigError("zero denominator");
  const uint8_t rm = static_cast<uint8_t>((uint32_t{1} << p_.rows) - 1);
  const uint8_t cm = static_cast<uint8_t>((uint32_t{1} << p_.cols) - 1);
  const auto& f = errors_by_depth(rm, cm);
  const uint64_t total = p_.total_weight();
  for (int d = 0; d < static_cast<int>(f.size()); ++d)
    if (static_cast<__int128>(f[d]) * eps_den <= static_cast<__int128>(eps_num) * total) return d;
  return max_depth_;  // unreachable: singleton rectangles have zero error
}

int exact_dcc(const TinyProblem& p, uint64_t eps_num, uint64_t eps_den, OutputMode mode) {
  return DccOracle(p, mode).min_depth(eps_num, eps_den);
}

ColouringReport colouring_check(const std::vector<std::vector<int>>& colouring, uint64_t r_num,
                                uint64_t r_den) {
  ColouringReport rep;
  const uint64_t X = colouring.size();
  if (X == 0 || colouring[0].empty()) throw ConfigError("empty colouring");
  const uint64_t Y = colouring[0].size();
  uint64_t total_ones = 0;
  std::vector<uint64_t> row_weight(X, 0);
  for (uint64_t i = 0; i < X; ++i) {
    if (colouring[i].size() != Y) throw ConfigError("ragged colouring");
    for (int v : colouring[i]) {
      if (v != 0 && v != 1) throw ConfigError("colour entries must be 0/1");
      row_weight[i] += v;
    }
    total_ones += row_weight[i];
  }
  rep.p = static_cast<double>(total_ones) / (static_cast<double>(X) * static_cast<double>(Y));

  if (r_den == 0 || r_num == 0) {
    rep.hypothesis_ok = false;
    rep.note = "need r > 0";
    return rep;
  }
  if ((r_num * Y) % r_den != 0) {
    rep.hypothesis_ok = false;
    rep.note = "r|Y| must be an integer";
    return rep;
  }
  // r < p, exactly: r_num * X * Y < total_ones * r_den
  if (static_cast<__int128>(r_num) * X * Y >= static_cast<__int128>(total_ones) * r_den) {
    rep.hypothesis_ok = false;
    rep.note = "need r < p";
    return rep;
  }

  const uint64_t rY = r_num * Y / r_den;
  for (uint64_t w : row_weight)
    if (w > rY) ++rep.heavy_rows;

  // bound = (p - r)/(1 - r) |X| = X (T r_den - r_num X Y) / (X Y (r_den - r_num))
  const __int128 lhs = static_cast<__int128>(rep.heavy_rows) * X * Y * (r_den - r_num);
  const __int128 rhs =
      static_cast<__int128>(X) *
      (static_cast<__int128>(total_ones) * r_den - static_cast<__int128>(r_num) * X * Y);
  rep.holds = lhs >= rhs;
  rep.bound = static_cast<double>(rhs) / (static_cast<double>(X) * Y * (r_den - r_num));
  return rep;
}

InfoCheck razborov_info_exact(uint32_t n, double k) {
  const uint32_t m = dist::mu_set_size(n, k);
  auto mu = dist::make_mu(n, m);
  if (mu->support_size() > 10'000'000)
    throw TooLargeToEnumerate("support exceeds the full-enumeration budget");
  // aggregate the marginals first, assume nothing about their shape
  std::unordered_map<Bits, double, BitsHash> ma, mb;
  mu->for_each_support([&](const Bits& x, const Bits& y, double mass) {
    ma[x] += mass;
    mb[y] += mass;
  });
  double exact = 0;
  mu->for_each_support([&](const Bits& x, const Bits& y, double mass) {
    if (mass > 0) exact += mass * std::log2(mass / (ma.at(x) * mb.at(y)));
  });
  InfoCheck out;
  out.exact = exact;
  out.closed_form = dist::mu_info_closed_form(n, m);
  out.within_budget = exact <= k;
  return out;
}

InfoCheck razborov_info_orbit(uint32_t n, double k) {
  const uint32_t m = dist::mu_set_size(n, k);
  if (m < 1 || 2 * m > n) throw ConfigError("orbit route needs 1 <= m <= n/2");
  // two orbits under the symmetry group: disjoint pairs and singly-meeting
  // pairs; the log-ratio is constant on each because both marginals are
  // uniform over m-subsets
  const double log2_C = stats::log2_choose(n, m);
  const double log2_N0 = log2_C + stats::log2_choose(n - m, m);
  const double log2_N1 =
      std::log2(double(n)) + stats::log2_choose(n - 1, m - 1) + stats::log2_choose(n - m, m - 1);
  const double ratio0 = std::log2(0.75) - log2_N0 + 2 * log2_C;
  const double ratio1 = std::log2(0.25) - log2_N1 + 2 * log2_C;
  InfoCheck out;
  out.exact = 0.75 * ratio0 + 0.25 * ratio1;
  out.closed_form = dist::mu_info_closed_form(n, m);
  out.within_budget = out.exact <= k;
  return out;
}

EquivalenceReport sampler_equivalence(const dist::BipartiteDist& a, const dist::BipartiteDist& b,
                                      uint64_t samples, uint64_t seed) {
  if (!a || !b) throw ConfigError("sampler_equivalence: null distribution");
  if (a->n() != b->n()) throw ConfigError("sampler_equivalence: different universes");
  EquivalenceReport rep;
  rep.max_mass_diff = std::numeric_limits<double>::quiet_NaN();
  rep.p_value = std::numeric_limits<double>::quiet_NaN();

  const bool exact = a->enumerable() && b->enumerable();
  if (exact) {
    double md = 0;
    a->for_each_support([&](const Bits& x, const Bits& y, double m) {
      md = std::max(md, std::fabs(m - b->mass(x, y)));
    });
    b->for_each_support([&](const Bits& x, const Bits& y, double m) {
      md = std::max(md, std::fabs(m - a->mass(x, y)));
    });
    rep.max_mass_diff = md;
  } else if (samples == 0) {
    throw ConfigError("sampler_equivalence: need samples when a side cannot enumerate");
  }

  if (samples > 0) {
    constexpr uint32_t kBuckets = 512;
    std::vector<uint64_t> ca(kBuckets, 0), cb(kBuckets, 0);
    const auto bucket = [](const Bits& x, const Bits& y) {
      return mix64(x.hash() ^ mix64(y.hash() + 0x9e3779b97f4a7c15ULL)) & (kBuckets - 1);
    };
    Rng ra = Rng(seed).derive(0xa11ce), rb = Rng(seed).derive(0xb0b);
    for (uint64_t i = 0; i < samples; ++i) {
      auto [xa, ya] = a->sample(ra);
      ++ca[bucket(xa, ya)];
      auto [xb, yb] = b->sample(rb);
      ++cb[bucket(xb, yb)];
    }
    double stat = 0;
    uint32_t live = 0;
    for (uint32_t i = 0; i < kBuckets; ++i) {
      const double s = static_cast<double>(ca[i]) + static_cast<double>(cb[i]);
      if (s == 0) continue;
      ++live;
      const double d = static_cast<double>(ca[i]) - static_cast<double>(cb[i]);
      stat += d * d / s;
    }
    rep.p_value = live > 1 ? stats::chi_square_pvalue(stat, live - 1) : 1.0;
    rep.samples = samples;
  }
  return rep;
}

}  // namespace commlab::oracle
