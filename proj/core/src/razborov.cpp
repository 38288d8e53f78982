#include "commlab/razborov.hpp"

#include <cmath>
#include <limits>

#include "commlab/stats.hpp"

namespace commlab::dist {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// m-subsets of an explicit index list, emitted as Bits of width n.
void for_each_m_subset_of(uint32_t n, const std::vector<uint32_t>& universe, uint32_t m,
                          const std::function<void(const Bits&)>& f) {
  if (m > universe.size()) return;
  std::vector<uint32_t> idx(m);
  for (uint32_t i = 0; i < m; ++i) idx[i] = i;
  const uint32_t u = static_cast<uint32_t>(universe.size());
  while (true) {
    Bits b(n);
    for (uint32_t i : idx) b.set(universe[i]);
    f(b);
    if (m == 0) return;
    int i = static_cast<int>(m) - 1;
    while (i >= 0 && idx[i] == u - m + static_cast<uint32_t>(i)) --i;
    if (i < 0) return;
    ++idx[i];
    for (uint32_t j = static_cast<uint32_t>(i) + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<uint32_t> complement_of(const Bits& x, uint32_t n) {
  std::vector<uint32_t> out;
  out.reserve(n - x.count());
  for (uint32_t i = 0; i < n; ++i)
    if (!x.get(i)) out.push_back(i);
  return out;
}

Bits subset_of_list(Rng& rng, uint32_t n, const std::vector<uint32_t>& universe, uint32_t m) {
  Bits pick = sample_m_subset(rng, static_cast<uint32_t>(universe.size()), m);
  Bits out(n);
  pick.for_each_set([&](uint32_t i) { out.set(universe[i]); });
  return out;
}

}  // namespace

RazborovImpl::RazborovImpl(uint32_t n, uint32_t m, RazborovVariant v)
    : n_(n), m_(m), l_(0), v_(v) {
  if (m_ < 1 || 3ull * m_ > n_) throw ConfigError("RazborovImpl: need 1 <= m <= n/3");
  if (v_ == RazborovVariant::TripleMu) {
    if (n_ % 4 != 3) throw ConfigError("RazborovImpl: triple form needs n = 4l-1");
    l_ = (n_ + 1) / 4;
  }
}

double RazborovImpl::mass_disjoint() const {
  const double log2N0 = stats::log2_choose(n_, m_) + stats::log2_choose(n_ - m_, m_);
  switch (v_) {
    case RazborovVariant::Nu:
      return std::exp2(-log2N0);
    case RazborovVariant::Sigma:
      return 0.0;
    default:
      return 0.75 * std::exp2(-log2N0);
  }
}

double RazborovImpl::mass_meeting() const {
  const double log2N1 = std::log2(double(n_)) + stats::log2_choose(n_ - 1, m_ - 1) +
                        stats::log2_choose(n_ - m_, m_ - 1);
  switch (v_) {
    case RazborovVariant::Nu:
      return 0.0;
    case RazborovVariant::Sigma:
      return std::exp2(-log2N1);
    default:
      return 0.25 * std::exp2(-log2N1);
  }
}

uint64_t RazborovImpl::disjoint_pairs() const {
  return stats::choose_u64(n_, m_) * stats::choose_u64(n_ - m_, m_);
}

uint64_t RazborovImpl::meeting_pairs() const {
  return uint64_t(n_) * stats::choose_u64(n_ - 1, m_ - 1) * stats::choose_u64(n_ - m_, m_ - 1);
}

uint64_t RazborovImpl::triples() const {
  if (v_ != RazborovVariant::TripleMu) throw ConfigError("triples(): not a triple-form instance");
  return uint64_t(n_) * stats::choose_u64(n_ - 1, 2 * l_ - 1);
}

double RazborovImpl::mass(const Bits& x, const Bits& y) const {
  if (x.count() != m_ || y.count() != m_) return 0.0;
  const uint32_t c = (x & y).count();
  if (v_ == RazborovVariant::TripleMu) {
    // Sum over the four planting branches of P[triple consistent] * P[pick].
    const double log2NT = std::log2(double(n_)) + stats::log2_choose(n_ - 1, 2 * l_ - 1);
    const double lcm1 = stats::log2_choose(2 * l_ - 1, m_ - 1);
    const double lcm = stats::log2_choose(2 * l_ - 1, m_);
    if (c == 1) {
      return std::exp2(stats::log2_choose(n_ - 2 * m_ + 1, 2 * l_ - m_) - log2NT - 2 * lcm1 - 2.0);
    }
    if (c == 0) {
      double total = 0.0;
      if (n_ > 2 * m_) {
        total += std::exp2(std::log2(double(n_ - 2 * m_)) +
                           stats::log2_choose(n_ - 1 - 2 * m_, 2 * l_ - 1 - m_) - 2 * lcm - log2NT -
                           2.0);
      }
      total += std::exp2(std::log2(2.0 * m_) + stats::log2_choose(n_ - 2 * m_, 2 * l_ - m_) - lcm1 -
                         lcm - log2NT - 2.0);
      return total;
    }
    return 0.0;
  }
  if (c == 0) return mass_disjoint();
  if (c == 1) return mass_meeting();
  return 0.0;
}

std::pair<Bits, Bits> RazborovImpl::sample(Rng& rng) const {
  switch (v_) {
    case RazborovVariant::Nu: {
      Bits x = sample_m_subset(rng, n_, m_);
      Bits y = subset_of_list(rng, n_, complement_of(x, n_), m_);
      return {std::move(x), std::move(y)};
    }
    case RazborovVariant::Sigma: {
      const uint32_t i = static_cast<uint32_t>(rng.next_below(n_));
      Bits just_i(n_);
      just_i.set(i);
      Bits x = subset_of_list(rng, n_, complement_of(just_i, n_), m_ - 1);
      x.set(i);
      Bits y = subset_of_list(rng, n_, complement_of(x, n_), m_ - 1);
      y.set(i);
      return {std::move(x), std::move(y)};
    }
    case RazborovVariant::Mu: {
      RazborovImpl part(n_, m_, rng.next_below(4) < 3 ? RazborovVariant::Nu : RazborovVariant::Sigma);
      return part.sample(rng);
    }
    case RazborovVariant::TripleMu:
    default: {
      const uint32_t i = static_cast<uint32_t>(rng.next_below(n_));
      Bits just_i(n_);
      just_i.set(i);
      Bits A = subset_of_list(rng, n_, complement_of(just_i, n_), 2 * l_ - 1);
      Bits B = A | just_i;  // complement below
      std::vector<uint32_t> Bidx = complement_of(B, n_);
      std::vector<uint32_t> Aidx = A.to_indices();
      const uint64_t branch = rng.next_below(4);
      const bool x_has_i = (branch == 0 || branch == 2);
      const bool y_has_i = (branch == 0 || branch == 3);
      Bits x = subset_of_list(rng, n_, Aidx, x_has_i ? m_ - 1 : m_);
      if (x_has_i) x.set(i);
      Bits y = subset_of_list(rng, n_, Bidx, y_has_i ? m_ - 1 : m_);
      if (y_has_i) y.set(i);
      return {std::move(x), std::move(y)};
    }
  }
}

bool RazborovImpl::enumerable() const {
  const double log2N0 = stats::log2_choose(n_, m_) + stats::log2_choose(n_ - m_, m_);
  const double log2N1 = std::log2(double(n_)) + stats::log2_choose(n_ - 1, m_ - 1) +
                        stats::log2_choose(n_ - m_, m_ - 1);
  double total = 0;
  if (v_ != RazborovVariant::Sigma) total += std::exp2(log2N0);
  if (v_ != RazborovVariant::Nu) total += std::exp2(log2N1);
  return total <= 2.0e7;
}

uint64_t RazborovImpl::support_size() const {
  uint64_t total = 0;
  if (v_ != RazborovVariant::Sigma) total += disjoint_pairs();
  if (v_ != RazborovVariant::Nu) total += meeting_pairs();
  return total;
}

void RazborovImpl::for_each_support(const SupportVisitor& f) const {
  if (!enumerable()) throw TooLargeToEnumerate("RazborovImpl: support too large to stream");
  const double md = mass_disjoint();
  const double mm = mass_meeting();
  const bool triple = v_ == RazborovVariant::TripleMu;
  for_each_m_subset(n_, m_, [&](const Bits& x) {
    std::vector<uint32_t> comp = complement_of(x, n_);
    if (v_ != RazborovVariant::Sigma) {
      for_each_m_subset_of(n_, comp, m_, [&](const Bits& y) {
        f(x, y, triple ? mass(x, y) : md);
      });
    }
    if (v_ != RazborovVariant::Nu) {
      x.for_each_set([&](uint32_t i) {
        for_each_m_subset_of(n_, comp, m_ - 1, [&](const Bits& rest) {
          Bits y = rest;
          y.set(i);
          f(x, y, triple ? mass(x, y) : mm);
        });
      });
    }
  });
}

Marginal RazborovImpl::marginal_a() const {
  return std::make_shared<UniformSubsetsMarginal>(n_, m_);
}

Marginal RazborovImpl::marginal_b() const {
  return std::make_shared<UniformSubsetsMarginal>(n_, m_);
}

double RazborovImpl::cond_disjoint_prob_given_x(const Bits& x) const {
  if (x.count() != m_) return std::numeric_limits<double>::quiet_NaN();
  switch (v_) {
    case RazborovVariant::Nu:
      return 1.0;
    case RazborovVariant::Sigma:
      return 0.0;
    default:
      return 0.75;
  }
}

std::string RazborovImpl::describe() const {
  const char* names[] = {"nu", "sigma", "mu", "triple_mu"};
  return std::string(names[static_cast<int>(v_)]) + "(n=" + std::to_string(n_) +
         ",m=" + std::to_string(m_) + ")";
}

uint32_t mu_set_size(uint32_t n, double k) {
  if (k < 0) throw ConfigError("mu_set_size: negative k");
  return static_cast<uint32_t>(std::floor(kLn2 * std::sqrt(double(n) * (k + 1.0))));
}

BipartiteDist make_nu(uint32_t n, uint32_t m) {
  return std::make_shared<RazborovImpl>(n, m, RazborovVariant::Nu);
}
BipartiteDist make_sigma(uint32_t n, uint32_t m) {
  return std::make_shared<RazborovImpl>(n, m, RazborovVariant::Sigma);
}
BipartiteDist make_mu(uint32_t n, uint32_t m) {
  return std::make_shared<RazborovImpl>(n, m, RazborovVariant::Mu);
}
BipartiteDist make_mu_nk(uint32_t n, double k) { return make_mu(n, mu_set_size(n, k)); }
BipartiteDist make_triple_mu(uint32_t n, uint32_t m) {
  return std::make_shared<RazborovImpl>(n, m, RazborovVariant::TripleMu);
}

double mu_info_closed_form(uint32_t n, uint32_t m) {
  // valid whenever both orbit classes are nonempty (disjoint pairs need 2m <= n)
  if (m < 1 || 2ull * m > n) throw ConfigError("mu_info_closed_form: need 1 <= m <= n/2");
  return stats::log2_choose(n, m) - 0.75 * stats::log2_choose(n - m, m) -
         0.25 * (std::log2(double(m)) + stats::log2_choose(n - m, m - 1)) -
         stats::binary_entropy(0.25);
}

BipartiteDist make_tau(uint32_t n, double k) {
  if (k < 0.5) throw ConfigError("make_tau: need k >= 1/2");
  BipartiteDist mu = make_mu_nk(n, k);
  const uint32_t m = mu_set_size(n, k);
  Marginal marg = std::make_shared<UniformSubsetsMarginal>(n, m);
  BipartiteDist rho = make_product(marg, marg);
  const double w = 1.0 / (2.0 * k);
  return std::make_shared<MixtureImpl>(
      std::vector<std::pair<double, BipartiteDist>>{{w, mu}, {1.0 - w, rho}});
}

}  // namespace commlab::dist
