#include "commlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "commlab/stats.hpp"

namespace commlab::dist {

namespace {

constexpr double kMassTol = 1e-6;

double u01_positive(Rng& rng) {
  // (0,1]: safe under log().
  return (static_cast<double>(rng.next() >> 11) + 1.0) * 0x1.0p-53;
}

Bits widen(const Bits& b, uint32_t outer_n) {
  Bits r(outer_n);
  b.for_each_set([&](uint32_t i) { r.set(i); });
  return r;
}

Bits narrow(const Bits& b, uint32_t inner_n) {
  Bits r(inner_n);
  b.for_each_set([&](uint32_t i) {
    if (i < inner_n) r.set(i);
  });
  return r;
}

bool high_bits_clear(const Bits& b, uint32_t inner_n) {
  bool ok = true;
  b.for_each_set([&](uint32_t i) {
    if (i >= inner_n) ok = false;
  });
  return ok;
}

size_t pick_by_cum(const std::vector<double>& cum, double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  size_t i = static_cast<size_t>(it - cum.begin());
  return std::min(i, cum.size() - 1);
}

}  // namespace

// ----- MarginalDist ----------------------------------------------------------

double MarginalDist::prob_disjoint(const Bits& s) const {
  if (!enumerable()) throw Error("prob_disjoint: marginal not enumerable and no closed form");
  double total = 0;
  for_each_support([&](const Bits& x, double m) {
    if (!x.intersects(s)) total += m;
  });
  return total;
}

// ----- EnumerableMarginal ----------------------------------------------------

EnumerableMarginal::EnumerableMarginal(uint32_t n, std::vector<std::pair<Bits, double>> support)
    : n_(n), support_(std::move(support)) {
  if (support_.empty()) throw ConfigError("EnumerableMarginal: empty support");
  double total = 0;
  for (auto& [x, m] : support_) {
    if (m <= 0) throw ConfigError("EnumerableMarginal: nonpositive mass");
    if (x.size() != n_) throw ConfigError("EnumerableMarginal: wrong input width");
    total += m;
  }
  cum_.reserve(support_.size());
  double run = 0;
  for (auto& [x, m] : support_) {
    m /= total;  // normalize
    run += m;
    cum_.push_back(run);
    lookup_[x] += m;
  }
}

double EnumerableMarginal::mass(const Bits& x) const {
  auto it = lookup_.find(x);
  return it == lookup_.end() ? 0.0 : it->second;
}

Bits EnumerableMarginal::sample(Rng& rng) const {
  return support_[pick_by_cum(cum_, rng.next_double())].first;
}

void EnumerableMarginal::for_each_support(const std::function<void(const Bits&, double)>& f) const {
  for (const auto& [x, m] : support_) f(x, m);
}

double EnumerableMarginal::prob_disjoint(const Bits& s) const {
  double total = 0;
  for (const auto& [x, m] : support_)
    if (!x.intersects(s)) total += m;
  return total;
}

std::string EnumerableMarginal::describe() const {
  return "enumerable(n=" + std::to_string(n_) + ",supp=" + std::to_string(support_.size()) + ")";
}

// ----- BernoulliMarginal -----------------------------------------------------

BernoulliMarginal::BernoulliMarginal(uint32_t n, double p) : n_(n), p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("BernoulliMarginal: p outside [0,1]");
}

double BernoulliMarginal::mass(const Bits& x) const {
  const uint32_t c = x.count();
  if (p_ == 0.0) return c == 0 ? 1.0 : 0.0;
  if (p_ == 1.0) return c == n_ ? 1.0 : 0.0;
  return std::pow(p_, c) * std::pow(1.0 - p_, double(n_) - double(c));
}

Bits BernoulliMarginal::sample(Rng& rng) const {
  Bits x(n_);
  if (p_ == 0.0) return x;
  if (p_ == 1.0) {
    for (uint32_t i = 0; i < n_; ++i) x.set(i);
    return x;
  }
  // Geometric skips: next set index jumps by 1 + Geom(p).
  const double log1mp = std::log1p(-p_);
  int64_t i = -1;
  while (true) {
    const double u = u01_positive(rng);
    const double skip = std::floor(std::log(u) / log1mp);
    i += 1 + static_cast<int64_t>(std::min(skip, 4.0e9));
    if (i >= static_cast<int64_t>(n_)) break;
    x.set(static_cast<uint32_t>(i));
  }
  return x;
}

bool BernoulliMarginal::enumerable() const { return n_ <= 20; }

uint64_t BernoulliMarginal::support_size() const {
  if (p_ == 0.0 || p_ == 1.0) return 1;
  return uint64_t(1) << n_;
}

void BernoulliMarginal::for_each_support(const std::function<void(const Bits&, double)>& f) const {
  if (!enumerable()) throw TooLargeToEnumerate("BernoulliMarginal: n too large to stream");
  if (p_ == 0.0) {
    f(Bits(n_), 1.0);
    return;
  }
  if (p_ == 1.0) {
    f(Bits::from_low64(n_, ~uint64_t(0)), 1.0);
    return;
  }
  for (uint64_t msk = 0; msk < (uint64_t(1) << n_); ++msk) {
    Bits x = Bits::from_low64(n_, msk);
    f(x, mass(x));
  }
}

double BernoulliMarginal::prob_disjoint(const Bits& s) const {
  return std::pow(1.0 - p_, double(s.count()));
}

std::string BernoulliMarginal::describe() const {
  return "bernoulli(n=" + std::to_string(n_) + ",p=" + std::to_string(p_) + ")";
}

// ----- UniformSubsetsMarginal ------------------------------------------------

UniformSubsetsMarginal::UniformSubsetsMarginal(uint32_t n, uint32_t m) : n_(n), m_(m) {
  if (m > n) throw ConfigError("UniformSubsetsMarginal: m > n");
}

double UniformSubsetsMarginal::mass(const Bits& x) const {
  if (x.count() != m_) return 0.0;
  return std::exp2(-stats::log2_choose(n_, m_));
}

Bits UniformSubsetsMarginal::sample(Rng& rng) const { return sample_m_subset(rng, n_, m_); }

bool UniformSubsetsMarginal::enumerable() const {
  return stats::log2_choose(n_, m_) <= std::log2(2.0e7);
}

uint64_t UniformSubsetsMarginal::support_size() const { return stats::choose_u64(n_, m_); }

void UniformSubsetsMarginal::for_each_support(const std::function<void(const Bits&, double)>& f) const {
  if (!enumerable()) throw TooLargeToEnumerate("UniformSubsetsMarginal: too many subsets");
  const double m = std::exp2(-stats::log2_choose(n_, m_));
  for_each_m_subset(n_, m_, [&](const Bits& x) { f(x, m); });
}

double UniformSubsetsMarginal::prob_disjoint(const Bits& s) const {
  const uint32_t c = s.count();
  if (c > n_ - m_) return 0.0;
  return std::exp2(stats::log2_choose(n_ - c, m_) - stats::log2_choose(n_, m_));
}

std::string UniformSubsetsMarginal::describe() const {
  return "uniform_subsets(n=" + std::to_string(n_) + ",m=" + std::to_string(m_) + ")";
}

// ----- DistImpl --------------------------------------------------------------

double DistImpl::cond_disjoint_prob_given_x(const Bits&) const {
  return std::numeric_limits<double>::quiet_NaN();
}

// ----- SparseSupportImpl -----------------------------------------------------

SparseSupportImpl::SparseSupportImpl(uint32_t n, std::vector<std::tuple<Bits, Bits, double>> support,
                                     bool normalize)
    : n_(n), support_(std::move(support)) {
  if (support_.empty()) throw ConfigError("SparseSupportImpl: empty support");
  double total = 0;
  for (auto& [x, y, m] : support_) {
    if (m <= 0) throw ConfigError("SparseSupportImpl: nonpositive mass");
    if (x.size() != n_ || y.size() != n_) throw ConfigError("SparseSupportImpl: wrong input width");
    total += m;
  }
  if (!normalize && std::fabs(total - 1.0) > kMassTol)
    throw ConfigError("SparseSupportImpl: masses sum to " + std::to_string(total));
  cum_.reserve(support_.size());
  double run = 0;
  for (auto& [x, y, m] : support_) {
    m /= total;
    run += m;
    cum_.push_back(run);
    lookup_[{x, y}] += m;
  }
}

double SparseSupportImpl::mass(const Bits& x, const Bits& y) const {
  auto it = lookup_.find({x, y});
  return it == lookup_.end() ? 0.0 : it->second;
}

std::pair<Bits, Bits> SparseSupportImpl::sample(Rng& rng) const {
  const auto& [x, y, m] = support_[pick_by_cum(cum_, rng.next_double())];
  (void)m;
  return {x, y};
}

void SparseSupportImpl::for_each_support(const SupportVisitor& f) const {
  for (const auto& [x, y, m] : support_) f(x, y, m);
}

Marginal SparseSupportImpl::marginal_a() const {
  std::call_once(marg_once_, [this] {
    std::map<Bits, double> ma, mb;
    for (const auto& [x, y, m] : support_) {
      ma[x] += m;
      mb[y] += m;
    }
    std::vector<std::pair<Bits, double>> va(ma.begin(), ma.end()), vb(mb.begin(), mb.end());
    marg_a_ = std::make_shared<EnumerableMarginal>(n_, std::move(va));
    marg_b_ = std::make_shared<EnumerableMarginal>(n_, std::move(vb));
  });
  return marg_a_;
}

Marginal SparseSupportImpl::marginal_b() const {
  marginal_a();
  return marg_b_;
}

std::string SparseSupportImpl::describe() const {
  return "explicit(n=" + std::to_string(n_) + ",supp=" + std::to_string(support_.size()) + ")";
}

// ----- ProductImpl -----------------------------------------------------------

ProductImpl::ProductImpl(Marginal a, Marginal b) : a_(std::move(a)), b_(std::move(b)) {
  if (!a_ || !b_) throw ConfigError("ProductImpl: null marginal");
  if (a_->n() != b_->n()) throw ConfigError("ProductImpl: marginals disagree on n");
}

std::pair<Bits, Bits> ProductImpl::sample(Rng& rng) const {
  Bits x = a_->sample(rng);
  Bits y = b_->sample(rng);
  return {std::move(x), std::move(y)};
}

bool ProductImpl::enumerable() const {
  if (!a_->enumerable() || !b_->enumerable()) return false;
  const double total = static_cast<double>(a_->support_size()) * static_cast<double>(b_->support_size());
  return total <= 2.0e7;
}

uint64_t ProductImpl::support_size() const { return a_->support_size() * b_->support_size(); }

void ProductImpl::for_each_support(const SupportVisitor& f) const {
  if (!enumerable()) throw TooLargeToEnumerate("ProductImpl: support too large to stream");
  a_->for_each_support([&](const Bits& x, double mx) {
    b_->for_each_support([&](const Bits& y, double my) { f(x, y, mx * my); });
  });
}

std::string ProductImpl::describe() const {
  return "product(" + a_->describe() + " x " + b_->describe() + ")";
}

// ----- MixtureImpl -----------------------------------------------------------

MixtureImpl::MixtureImpl(std::vector<std::pair<double, BipartiteDist>> components)
    : comps_(std::move(components)) {
  if (comps_.empty()) throw ConfigError("MixtureImpl: no components");
  double total = 0;
  for (auto& [w, d] : comps_) {
    if (!d) throw ConfigError("MixtureImpl: null component");
    if (w <= 0) throw ConfigError("MixtureImpl: nonpositive weight");
    if (d->n() != comps_[0].second->n()) throw ConfigError("MixtureImpl: components disagree on n");
    total += w;
  }
  if (std::fabs(total - 1.0) > kMassTol)
    throw ConfigError("MixtureImpl: weights sum to " + std::to_string(total));
}

uint32_t MixtureImpl::n() const { return comps_[0].second->n(); }

double MixtureImpl::mass(const Bits& x, const Bits& y) const {
  double m = 0;
  for (const auto& [w, d] : comps_) m += w * d->mass(x, y);
  return m;
}

std::pair<Bits, Bits> MixtureImpl::sample(Rng& rng) const {
  double u = rng.next_double();
  for (const auto& [w, d] : comps_) {
    if (u < w) return d->sample(rng);
    u -= w;
  }
  return comps_.back().second->sample(rng);
}

bool MixtureImpl::enumerable() const {
  for (const auto& [w, d] : comps_)
    if (!d->enumerable()) return false;
  return true;
}

uint64_t MixtureImpl::support_size() const {
  std::call_once(size_once_, [this] {
    uint64_t c = 0;
    for_each_support([&](const Bits&, const Bits&, double) { ++c; });
    cached_support_size_ = c;
  });
  return cached_support_size_;
}

void MixtureImpl::for_each_support(const SupportVisitor& f) const {
  if (!enumerable()) throw TooLargeToEnumerate("MixtureImpl: component not enumerable");
  // Pair owned by the first component that gives it mass; emit total mass once.
  for (size_t j = 0; j < comps_.size(); ++j) {
    comps_[j].second->for_each_support([&](const Bits& x, const Bits& y, double) {
      for (size_t j2 = 0; j2 < j; ++j2)
        if (comps_[j2].second->mass(x, y) > 0) return;
      f(x, y, mass(x, y));
    });
  }
}

Marginal MixtureImpl::marginal_a() const {
  std::call_once(marg_once_, [this] {
    std::map<Bits, double> ma, mb;
    for (const auto& [w, d] : comps_) {
      auto a = d->marginal_a();
      auto b = d->marginal_b();
      if (!a->enumerable() || !b->enumerable())
        throw Error("MixtureImpl: component marginal not enumerable");
      a->for_each_support([&](const Bits& x, double m) { ma[x] += w * m; });
      b->for_each_support([&](const Bits& y, double m) { mb[y] += w * m; });
    }
    std::vector<std::pair<Bits, double>> va(ma.begin(), ma.end()), vb(mb.begin(), mb.end());
    marg_a_ = std::make_shared<EnumerableMarginal>(n(), std::move(va));
    marg_b_ = std::make_shared<EnumerableMarginal>(n(), std::move(vb));
  });
  return marg_a_;
}

Marginal MixtureImpl::marginal_b() const {
  marginal_a();
  return marg_b_;
}

std::string MixtureImpl::describe() const {
  std::string s = "mixture(";
  for (size_t j = 0; j < comps_.size(); ++j) {
    if (j) s += " + ";
    s += std::to_string(comps_[j].first) + "*" + comps_[j].second->describe();
  }
  return s + ")";
}

// ----- ZeroPadImpl -----------------------------------------------------------

ZeroPadImpl::ZeroPadImpl(BipartiteDist inner, uint32_t outer_n)
    : inner_(std::move(inner)), outer_n_(outer_n) {
  if (!inner_) throw ConfigError("ZeroPadImpl: null inner");
  if (outer_n_ < inner_->n()) throw ConfigError("ZeroPadImpl: outer universe smaller than inner");
}

double ZeroPadImpl::mass(const Bits& x, const Bits& y) const {
  const uint32_t in = inner_->n();
  if (!high_bits_clear(x, in) || !high_bits_clear(y, in)) return 0.0;
  return inner_->mass(narrow(x, in), narrow(y, in));
}

std::pair<Bits, Bits> ZeroPadImpl::sample(Rng& rng) const {
  auto [x, y] = inner_->sample(rng);
  return {widen(x, outer_n_), widen(y, outer_n_)};
}

void ZeroPadImpl::for_each_support(const SupportVisitor& f) const {
  inner_->for_each_support(
      [&](const Bits& x, const Bits& y, double m) { f(widen(x, outer_n_), widen(y, outer_n_), m); });
}

namespace {

// Marginal of a zero-padded distribution.
class ZeroPadMarginal : public MarginalDist {
 public:
  ZeroPadMarginal(Marginal inner, uint32_t outer_n) : inner_(std::move(inner)), outer_n_(outer_n) {}
  uint32_t n() const override { return outer_n_; }
  double mass(const Bits& x) const override {
    if (!high_bits_clear(x, inner_->n())) return 0.0;
    return inner_->mass(narrow(x, inner_->n()));
  }
  Bits sample(Rng& rng) const override { return widen(inner_->sample(rng), outer_n_); }
  bool enumerable() const override { return inner_->enumerable(); }
  uint64_t support_size() const override { return inner_->support_size(); }
  void for_each_support(const std::function<void(const Bits&, double)>& f) const override {
    inner_->for_each_support([&](const Bits& x, double m) { f(widen(x, outer_n_), m); });
  }
  double prob_disjoint(const Bits& s) const override {
    return inner_->prob_disjoint(narrow(s, inner_->n()));
  }
  std::string describe() const override {
    return "zeropad(" + inner_->describe() + ",N=" + std::to_string(outer_n_) + ")";
  }

 private:
  Marginal inner_;
  uint32_t outer_n_;
};

}  // namespace

Marginal ZeroPadImpl::marginal_a() const {
  return std::make_shared<ZeroPadMarginal>(inner_->marginal_a(), outer_n_);
}

Marginal ZeroPadImpl::marginal_b() const {
  return std::make_shared<ZeroPadMarginal>(inner_->marginal_b(), outer_n_);
}

double ZeroPadImpl::cond_disjoint_prob_given_x(const Bits& x) const {
  if (!high_bits_clear(x, inner_->n())) return std::numeric_limits<double>::quiet_NaN();
  return inner_->cond_disjoint_prob_given_x(narrow(x, inner_->n()));
}

std::string ZeroPadImpl::describe() const {
  return "zeropad(" + inner_->describe() + ",N=" + std::to_string(outer_n_) + ")";
}

// ----- constructors / transforms ----------------------------------------------

BipartiteDist make_product(Marginal a, Marginal b) {
  return std::make_shared<ProductImpl>(std::move(a), std::move(b));
}

BipartiteDist make_explicit(uint32_t n, std::vector<std::tuple<Bits, Bits, double>> support,
                            bool normalize) {
  return std::make_shared<SparseSupportImpl>(n, std::move(support), normalize);
}

BipartiteDist restrict_condition(const BipartiteDist& d,
                                 const std::function<bool(const Bits&, const Bits&)>& keep,
                                 uint64_t cap) {
  if (!d) throw ConfigError("restrict_condition: null distribution");
  if (!d->enumerable())
    throw TooLargeToEnumerate("restrict_condition: distribution not enumerable");
  std::vector<std::tuple<Bits, Bits, double>> kept;
  d->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (!keep(x, y)) return;
    if (kept.size() >= cap) throw TooLargeToEnumerate("restrict_condition: survivor cap exceeded");
    kept.emplace_back(x, y, m);
  });
  if (kept.empty()) throw EmptyConditioning("restrict_condition: event has zero mass");
  return std::make_shared<SparseSupportImpl>(d->n(), std::move(kept), /*normalize=*/true);
}

BipartiteDist zero_pad_transform(const BipartiteDist& d, uint32_t outer_n) {
  return std::make_shared<ZeroPadImpl>(d, outer_n);
}

Bits sample_m_subset(Rng& rng, uint32_t n, uint32_t m) {
  if (m > n) throw ConfigError("sample_m_subset: m > n");
  Bits s(n);
  for (uint32_t j = n - m; j < n; ++j) {
    const uint32_t t = static_cast<uint32_t>(rng.next_below(j + 1));
    if (s.get(t))
      s.set(j);
    else
      s.set(t);
  }
  return s;
}

void for_each_m_subset(uint32_t n, uint32_t m, const std::function<void(const Bits&)>& f) {
  if (m > n) return;
  std::vector<uint32_t> idx(m);
  for (uint32_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    f(Bits::from_indices(n, idx));
    if (m == 0) return;
    int i = static_cast<int>(m) - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (uint32_t j = static_cast<uint32_t>(i) + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace commlab::dist
