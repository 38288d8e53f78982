#pragma once

#include <cstdint>

#include "commlab/dist.hpp"

namespace commlab::dist {

// Hard-instance family for set intersection: both sets have size m; with
// weight 3/4 the pair is disjoint (uniform over such pairs), with weight 1/4
// it meets in exactly one point (uniform).  Nu and Sigma are the two pure
// parts; TripleMu draws the same law through a planted (i, A, B) partition.
enum class RazborovVariant { Nu, Sigma, Mu, TripleMu };

class RazborovImpl : public DistImpl {
 public:
  // Requires 1 <= m <= n/3; TripleMu additionally requires n = 4l-1.
  RazborovImpl(uint32_t n, uint32_t m, RazborovVariant v);

  uint32_t n() const override { return n_; }
  double mass(const Bits& x, const Bits& y) const override;
  std::pair<Bits, Bits> sample(Rng& rng) const override;
  bool enumerable() const override;
  uint64_t support_size() const override;
  void for_each_support(const SupportVisitor& f) const override;
  Marginal marginal_a() const override;
  Marginal marginal_b() const override;
  double cond_disjoint_prob_given_x(const Bits& x) const override;
  std::string describe() const override;

  uint32_t m() const { return m_; }
  RazborovVariant variant() const { return v_; }
  uint64_t disjoint_pairs() const;  // #{(x,y) : x ∩ y = ∅}; exact, small n only
  uint64_t meeting_pairs() const;   // #{(x,y) : |x ∩ y| = 1}; exact, small n only
  double mass_disjoint() const;     // per-pair mass, x ∩ y = ∅
  double mass_meeting() const;      // per-pair mass, |x ∩ y| = 1
  uint64_t triples() const;         // n * C(n-1, 2l-1); triple form, small n only

 private:
  uint32_t n_, m_, l_;
  RazborovVariant v_;
};

// m = floor(ln 2 * sqrt(n (k+1))); the set size that keeps the mutual
// information of make_mu(n, m) near k.
uint32_t mu_set_size(uint32_t n, double k);

BipartiteDist make_nu(uint32_t n, uint32_t m);
BipartiteDist make_sigma(uint32_t n, uint32_t m);
BipartiteDist make_mu(uint32_t n, uint32_t m);
BipartiteDist make_mu_nk(uint32_t n, double k);
BipartiteDist make_triple_mu(uint32_t n, uint32_t m);

// I(X;Y) under make_mu(n, m), in bits:
//   log2 C(n,m) - (3/4) log2 C(n-m,m) - (1/4)(log2 m + log2 C(n-m,m-1)) - H(1/4).
double mu_info_closed_form(uint32_t n, uint32_t m);

// (1/2k) mu + (1 - 1/2k) (product of mu's marginals); requires k >= 1/2.
BipartiteDist make_tau(uint32_t n, double k);

}  // namespace commlab::dist
