#include "commlab/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace commlab::info {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

// mu truncated to {log-ratio <= threshold} and rescaled; lazy, so huge
// enumerable supports never materialize.
class TruncatedImpl : public dist::DistImpl {
 public:
  TruncatedImpl(dist::BipartiteDist base, dist::Marginal ma, dist::Marginal mb, double threshold,
                double kept_mass)
      : base_(std::move(base)),
        ma_(std::move(ma)),
        mb_(std::move(mb)),
        thr_(threshold),
        kept_(kept_mass) {}

  uint32_t n() const override { return base_->n(); }

  bool keeps(const Bits& x, const Bits& y, double m) const {
    return std::log2(m / (ma_->mass(x) * mb_->mass(y))) <= thr_ + 1e-12;
  }

  double mass(const Bits& x, const Bits& y) const override {
    const double m = base_->mass(x, y);
    if (m <= 0 || !keeps(x, y, m)) return 0.0;
    return m / kept_;
  }

  std::pair<Bits, Bits> sample(Rng& rng) const override {
    while (true) {
      auto [x, y] = base_->sample(rng);
      if (keeps(x, y, base_->mass(x, y))) return {std::move(x), std::move(y)};
    }
  }

  bool enumerable() const override { return base_->enumerable(); }

  uint64_t support_size() const override {
    std::call_once(size_once_, [this] {
      uint64_t c = 0;
      for_each_support([&](const Bits&, const Bits&, double) { ++c; });
      size_ = c;
    });
    return size_;
  }

  void for_each_support(const dist::SupportVisitor& f) const override {
    base_->for_each_support([&](const Bits& x, const Bits& y, double m) {
      if (keeps(x, y, m)) f(x, y, m / kept_);
    });
  }

  dist::Marginal marginal_a() const override {
    build_marginals();
    return out_ma_;
  }
  dist::Marginal marginal_b() const override {
    build_marginals();
    return out_mb_;
  }

  std::string describe() const override {
    return "truncate(" + base_->describe() + ",thr=" + std::to_string(thr_) + ")";
  }

 private:
  void build_marginals() const {
    std::call_once(marg_once_, [this] {
      std::map<Bits, double> a, b;
      for_each_support([&](const Bits& x, const Bits& y, double m) {
        a[x] += m;
        b[y] += m;
      });
      std::vector<std::pair<Bits, double>> va(a.begin(), a.end()), vb(b.begin(), b.end());
      out_ma_ = std::make_shared<dist::EnumerableMarginal>(n(), std::move(va));
      out_mb_ = std::make_shared<dist::EnumerableMarginal>(n(), std::move(vb));
    });
  }

  dist::BipartiteDist base_;
  dist::Marginal ma_, mb_;  // base's marginals (ratio test)
  double thr_, kept_;
  mutable std::once_flag size_once_, marg_once_;
  mutable uint64_t size_ = 0;
  mutable dist::Marginal out_ma_, out_mb_;
};

}  // namespace

InfoReport divergence_suite(const dist::BipartiteDist& mu, const dist::BipartiteDist& sigma) {
  if (!mu) throw ConfigError("divergence_suite: null distribution");
  if (!mu->enumerable()) throw TooLargeToEnumerate("divergence_suite: mu not enumerable");
  if (sigma && sigma->n() != mu->n()) throw ConfigError("divergence_suite: universe mismatch");

  dist::Marginal ma = mu->marginal_a();
  dist::Marginal mb = mu->marginal_b();

  InfoReport rep;
  rep.D_inf = -kInf;
  rep.I_inf = -kInf;
  mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (m <= 0) return;
    const double ratio_i = std::log2(m / (ma->mass(x) * mb->mass(y)));
    rep.I += m * ratio_i;
    rep.I_inf = std::max(rep.I_inf, ratio_i);
    if (sigma) {
      const double sm = sigma->mass(x, y);
      if (sm <= 0) {
        if (rep.finite) {
          rep.finite = false;
          rep.witness_x = x;
          rep.witness_y = y;
        }
        rep.D = kInf;
        rep.D_inf = kInf;
        return;
      }
      if (rep.finite) {
        const double ratio_d = std::log2(m / sm);
        rep.D += m * ratio_d;
        rep.D_inf = std::max(rep.D_inf, ratio_d);
      }
    }
  });
  if (!sigma) {
    rep.D = rep.I;
    rep.D_inf = rep.I_inf;
  }
  // tiny negative values are summation noise
  if (rep.I < 0 && rep.I > -1e-12) rep.I = 0;
  return rep;
}

SubstateReport substate_truncate_report(const dist::BipartiteDist& mu, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("substate_truncate: eps outside (0,1)");
  if (!mu) throw ConfigError("substate_truncate: null distribution");
  if (!mu->enumerable()) throw TooLargeToEnumerate("substate_truncate: mu not enumerable");

  dist::Marginal ma = mu->marginal_a();
  dist::Marginal mb = mu->marginal_b();

  // Only positive log-ratio points are drop candidates.
  std::vector<std::pair<double, double>> pos;  // (ratio, mass)
  double info = 0;
  mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (m <= 0) return;
    const double r = std::log2(m / (ma->mass(x) * mb->mass(y)));
    info += m * r;
    if (r > 0) {
      if (pos.size() >= 50'000'000)
        throw TooLargeToEnumerate("substate_truncate: too many positive-ratio points");
      pos.emplace_back(r, m);
    }
  });

  std::sort(pos.begin(), pos.end(), [](auto& a, auto& b) { return a.first > b.first; });

  // Drop maximal-ratio groups while total dropped mass stays <= eps; a group
  // is a run of equal ratios (a cut "log-ratio > t" can't split it).
  double dropped = 0;
  size_t i = 0;
  while (i < pos.size()) {
    size_t j = i;
    double gm = 0;
    while (j < pos.size() && pos[j].first == pos[i].first) gm += pos[j++].second;
    if (dropped + gm > eps) break;
    dropped += gm;
    i = j;
  }
  const double threshold = i < pos.size() ? pos[i].first : 0.0;

  SubstateReport rep;
  rep.tv = dropped;
  rep.threshold_bits = threshold;
  rep.info_in = info;
  if (dropped == 0) {
    rep.out = mu;  // nothing above the cut: unchanged
  } else {
    rep.out = std::make_shared<TruncatedImpl>(mu, ma, mb, threshold, 1.0 - dropped);
  }
  return rep;
}

dist::BipartiteDist substate_truncate(const dist::BipartiteDist& mu, double eps) {
  return substate_truncate_report(mu, eps).out;
}

LemmaResult lemma_log_sum(const dist::BipartiteDist& mu, const dist::BipartiteDist& sigma,
                          const PairPred& event) {
  if (!mu || !sigma) throw ConfigError("lemma_log_sum: null distribution");
  if (!mu->enumerable() || !sigma->enumerable())
    throw TooLargeToEnumerate("lemma_log_sum: need enumerable distributions");
  LemmaResult res;
  double muE = 0, sigE = 0, lhs = 0;
  bool inf_lhs = false;
  mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (!event(x, y)) return;
    muE += m;
    const double sm = sigma->mass(x, y);
    if (sm <= 0)
      inf_lhs = true;
    else
      lhs += m * std::log2(m / sm);
  });
  sigma->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (event(x, y)) sigE += m;
  });
  res.lhs = inf_lhs ? kInf : lhs;
  if (muE <= 0) {
    res.rhs = 0.0;  // 0 log 0 = 0
  } else if (sigE <= 0) {
    res.rhs = kInf;
  } else {
    res.rhs = std::max(-1.0, muE * std::log2(muE / sigE));
  }
  res.holds = res.lhs >= res.rhs - kTol;
  return res;
}

LemmaResult lemma_restriction(const dist::BipartiteDist& mu, const dist::BipartiteDist& sigma,
                              const PairPred& event) {
  if (!mu || !sigma) throw ConfigError("lemma_restriction: null distribution");
  LemmaResult res;
  double alpha = 0;
  mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (event(x, y)) alpha += m;
  });
  if (alpha <= 0) {
    res.hypothesis_ok = false;
    res.note = "event has zero mass under mu";
    return res;
  }
  InfoReport base = divergence_suite(mu, sigma);
  if (!base.finite) {
    res.hypothesis_ok = false;
    res.note = "D(mu||sigma) infinite";
    return res;
  }
  auto mu_restr = dist::restrict_condition(mu, event);
  InfoReport restr = divergence_suite(mu_restr, sigma);
  res.lhs = restr.D;
  res.rhs = (base.D + 1.0) / alpha - std::log2(alpha);
  res.holds = res.lhs <= res.rhs + kTol;
  return res;
}

namespace {

// Boolean-joint helpers: distributions over Bits of width 1.
struct BoolJoint {
  double p[2][2];  // p[x][y]
  double pa1() const { return p[1][0] + p[1][1]; }
  double pb1() const { return p[0][1] + p[1][1]; }
};

BoolJoint extract_bool(const dist::BipartiteDist& d) {
  if (d->n() != 1) throw ConfigError("lemma: expected a Boolean joint (n=1)");
  BoolJoint j{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      j.p[x][y] = d->mass(Bits::from_low64(1, x), Bits::from_low64(1, y));
  return j;
}

double bool_mutual_information(const BoolJoint& j) {
  double info = 0;
  const double pa[2] = {1 - j.pa1(), j.pa1()};
  const double pb[2] = {1 - j.pb1(), j.pb1()};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (j.p[x][y] > 0) info += j.p[x][y] * std::log2(j.p[x][y] / (pa[x] * pb[y]));
  return std::max(info, 0.0);
}

}  // namespace

LemmaResult lemma_depression_half(const dist::BipartiteDist& mu) {
  LemmaResult res;
  BoolJoint j = extract_bool(mu);
  if (j.pa1() * j.pb1() < 2.0 * j.p[1][1] - kTol) {
    res.hypothesis_ok = false;
    res.note = "need muA(1) muB(1) >= 2 mu(1,1)";
    return res;
  }
  res.lhs = bool_mutual_information(j);
  res.rhs = j.pa1() * j.pb1() / 5.0;
  res.holds = res.lhs >= res.rhs - kTol;
  return res;
}

LemmaResult lemma_depression_product(const dist::BipartiteDist& mu,
                                     const dist::BipartiteDist& sigma) {
  LemmaResult res;
  BoolJoint j = extract_bool(mu);
  BoolJoint s = extract_bool(sigma);
  if (!sigma->is_product()) {
    // accept any sigma whose 2x2 table factorizes
    const double det = s.p[0][0] * s.p[1][1] - s.p[0][1] * s.p[1][0];
    if (std::fabs(det) > kTol) {
      res.hypothesis_ok = false;
      res.note = "sigma is not a product distribution";
      return res;
    }
  }
  if (s.pa1() * s.pb1() < 4.0 * j.p[1][1] - kTol) {
    res.hypothesis_ok = false;
    res.note = "need sigmaA(1) sigmaB(1) >= 4 mu(1,1)";
    return res;
  }
  double d = 0;
  bool infinite = false;
  for (int x = 0; x < 2 && !infinite; ++x)
    for (int y = 0; y < 2; ++y) {
      if (j.p[x][y] <= 0) continue;
      if (s.p[x][y] <= 0) {
        infinite = true;
        break;
      }
      d += j.p[x][y] * std::log2(j.p[x][y] / s.p[x][y]);
    }
  res.lhs = infinite ? kInf : d;
  res.rhs = s.p[1][1] / 16.0;
  res.holds = res.lhs >= res.rhs - kTol;
  return res;
}

double conditional_info_over_partition(const dist::BipartiteDist& mu,
                                       const std::vector<CoinBranch>& branches) {
  double total = 0;
  for (const auto& br : branches) {
    // bucket support pairs by rectangle id
    std::map<uint64_t, std::vector<std::tuple<Bits, Bits, double>>> buckets;
    mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
      buckets[br.label(x, y)].emplace_back(x, y, m);
    });
    double cond = 0;
    for (auto& [id, pairs] : buckets) {
      double alpha = 0;
      std::map<Bits, double> row, col;
      for (auto& [x, y, m] : pairs) {
        alpha += m;
        row[x] += m;
        col[y] += m;
      }
      if (alpha <= 0) continue;
      double bucket_info = 0;
      for (auto& [x, y, m] : pairs)
        bucket_info += m * std::log2(m * alpha / (row[x] * col[y]));
      cond += bucket_info;  // already weighted by in-bucket masses
    }
    total += br.weight * cond;
  }
  return std::max(total, 0.0);
}

LemmaResult lemma_partition_monotone(const dist::BipartiteDist& mu,
                                     const std::vector<CoinBranch>& branches) {
  if (!mu) throw ConfigError("lemma_partition_monotone: null distribution");
  if (!mu->enumerable()) throw TooLargeToEnumerate("lemma_partition_monotone: mu not enumerable");
  LemmaResult res;
  double wsum = 0;
  for (const auto& br : branches) wsum += br.weight;
  if (branches.empty() || std::fabs(wsum - 1.0) > 1e-6) {
    res.hypothesis_ok = false;
    res.note = "branch weights must sum to 1";
    return res;
  }

  // hypothesis: each branch labels supA x supB as a rectangle partition
  std::vector<Bits> supA, supB;
  mu->marginal_a()->for_each_support([&](const Bits& x, double) { supA.push_back(x); });
  mu->marginal_b()->for_each_support([&](const Bits& y, double) { supB.push_back(y); });
  for (const auto& br : branches) {
    struct Group {
      std::set<uint64_t> rows, cols;
      uint64_t count = 0;
    };
    std::map<uint64_t, Group> groups;
    for (size_t xi = 0; xi < supA.size(); ++xi)
      for (size_t yi = 0; yi < supB.size(); ++yi) {
        Group& g = groups[br.label(supA[xi], supB[yi])];
        g.rows.insert(xi);
        g.cols.insert(yi);
        ++g.count;
      }
    for (auto& [id, g] : groups) {
      if (g.count != static_cast<uint64_t>(g.rows.size()) * g.cols.size()) {
        res.hypothesis_ok = false;
        res.note = "branch labels are not a rectangle partition";
        return res;
      }
    }
  }

  res.lhs = divergence_suite(mu).I;
  res.rhs = conditional_info_over_partition(mu, branches);
  res.holds = res.lhs >= res.rhs - kTol;
  return res;
}

}  // namespace commlab::info
