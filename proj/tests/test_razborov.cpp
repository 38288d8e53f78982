#include "doctest.h"

#include <cmath>
#include <map>

#include "commlab/razborov.hpp"
#include "commlab/stats.hpp"

using namespace commlab;
using namespace commlab::dist;

TEST_CASE("set size schedule matches frozen values") {
  CHECK(mu_set_size(15, 1) == 3);
  CHECK(mu_set_size(15, 2) == 4);
  CHECK(mu_set_size(15, 4) == 6);
  CHECK(mu_set_size(31, 1) == 5);
  CHECK(mu_set_size(31, 2) == 6);
  CHECK(mu_set_size(31, 4) == 8);
  CHECK(mu_set_size(63, 1) == 7);
  CHECK(mu_set_size(63, 2) == 9);
  CHECK(mu_set_size(63, 4) == 12);
}

TEST_CASE("constructor enforces 1 <= m <= n/3") {
  CHECK_NOTHROW(make_mu(15, 5));
  CHECK_THROWS_AS(make_mu(15, 6), ConfigError);
  CHECK_THROWS_AS(make_mu(15, 0), ConfigError);
  // (n=15, k=4) wants m=6, which breaks the invariant
  CHECK_THROWS_AS(make_mu_nk(15, 4), ConfigError);
  CHECK_NOTHROW(make_mu_nk(15, 2));
}

TEST_CASE("orbit counts at n=15, m=3") {
  auto mu = std::dynamic_pointer_cast<const RazborovImpl>(make_mu(15, 3));
  REQUIRE(mu);
  CHECK(mu->disjoint_pairs() == 100100);  // C(15,3)*C(12,3)
  CHECK(mu->meeting_pairs() == 90090);    // 15*C(14,2)*C(12,2)
  CHECK(mu->support_size() == 190190);
  CHECK(mu->mass_disjoint() == doctest::Approx(0.75 / 100100).epsilon(1e-12));
  CHECK(mu->mass_meeting() == doctest::Approx(0.25 / 90090).epsilon(1e-12));
}

TEST_CASE("mass function by intersection size") {
  auto mu = make_mu(15, 3);
  Bits x(15, {0, 1, 2});
  Bits y0(15, {3, 4, 5}), y1(15, {0, 3, 4}), y2(15, {0, 1, 9});
  CHECK(mu->mass(x, y0) == doctest::Approx(0.75 / 100100).epsilon(1e-12));
  CHECK(mu->mass(x, y1) == doctest::Approx(0.25 / 90090).epsilon(1e-12));
  CHECK(mu->mass(x, y2) == 0.0);
  CHECK(mu->mass(x, Bits(15, {3, 4})) == 0.0);  // wrong size

  auto nu = make_nu(15, 3);
  CHECK(nu->mass(x, y0) == doctest::Approx(1.0 / 100100).epsilon(1e-12));
  CHECK(nu->mass(x, y1) == 0.0);
  auto sg = make_sigma(15, 3);
  CHECK(sg->mass(x, y0) == 0.0);
  CHECK(sg->mass(x, y1) == doctest::Approx(1.0 / 90090).epsilon(1e-12));
}

TEST_CASE("support streaming sums to one and respects intersection classes") {
  auto mu = make_mu(15, 3);
  double tot = 0, tot_disj = 0;
  uint64_t cnt = 0, cnt_meet = 0;
  mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
    const uint32_t c = (x & y).count();
    CHECK(x.count() == 3);
    CHECK(y.count() == 3);
    CHECK(c <= 1);
    tot += m;
    if (c == 0) tot_disj += m;
    if (c == 1) ++cnt_meet;
    ++cnt;
  });
  CHECK(cnt == 190190);
  CHECK(cnt_meet == 90090);
  CHECK(tot == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tot_disj == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("sampling hits the right branch fractions and set sizes") {
  auto mu = make_mu(31, 6);
  Rng rng(17);
  int disj = 0;
  const int T = 20000;
  for (int t = 0; t < T; ++t) {
    auto [x, y] = mu->sample(rng);
    CHECK(x.count() == 6);
    CHECK(y.count() == 6);
    const uint32_t c = (x & y).count();
    CHECK(c <= 1);
    disj += (c == 0);
  }
  CHECK(disj / double(T) == doctest::Approx(0.75).epsilon(0.03));
  CHECK(mu->cond_disjoint_prob_given_x(Bits(31, {0, 1, 2, 3, 4, 5})) == doctest::Approx(0.75));
}

TEST_CASE("marginal is uniform over m-subsets") {
  auto mu = make_mu(15, 3);
  auto ma = mu->marginal_a();
  CHECK(ma->mass(Bits(15, {0, 1, 2})) == doctest::Approx(1.0 / 455).epsilon(1e-12));
  // empirical: each coordinate appears with frequency m/n
  Rng rng(8);
  std::vector<int> hits(15, 0);
  const int T = 10000;
  for (int t = 0; t < T; ++t) {
    auto [x, y] = mu->sample(rng);
    x.for_each_set([&](uint32_t i) { ++hits[i]; });
  }
  for (int i = 0; i < 15; ++i)
    CHECK(hits[i] / double(T) == doctest::Approx(3.0 / 15).epsilon(0.12));
}

TEST_CASE("closed-form information at frozen grid points") {
  // frozen against an independent exact orbit summation
  CHECK(mu_info_closed_form(15, 3) == doctest::Approx(0.275086).epsilon(1e-5));
  CHECK(mu_info_closed_form(15, 4) == doctest::Approx(0.987085).epsilon(1e-5));
  CHECK(mu_info_closed_form(31, 5) == doctest::Approx(0.511674).epsilon(1e-5));
  CHECK(mu_info_closed_form(31, 6) == doctest::Approx(1.032415).epsilon(1e-5));
  CHECK(mu_info_closed_form(31, 8) == doctest::Approx(2.696736).epsilon(1e-5));
  CHECK(mu_info_closed_form(63, 7) == doctest::Approx(0.450383).epsilon(1e-5));
  CHECK(mu_info_closed_form(63, 9) == doctest::Approx(1.138630).epsilon(1e-5));
  CHECK(mu_info_closed_form(63, 12) == doctest::Approx(2.797852).epsilon(1e-5));
  // the (n=15, k=4) grid point wants m=6; that breaks the size invariant and
  // its information genuinely exceeds 4
  CHECK(mu_info_closed_form(15, 6) == doctest::Approx(4.293078).epsilon(1e-5));
  // monotone in m at fixed n
  CHECK(mu_info_closed_form(19, 4) < mu_info_closed_form(19, 5));
  CHECK(mu_info_closed_form(19, 5) < mu_info_closed_form(19, 6));
}

TEST_CASE("triple-form sampler: masses match the mixture law exactly") {
  auto tmu = std::dynamic_pointer_cast<const RazborovImpl>(make_triple_mu(15, 3));
  REQUIRE(tmu);
  CHECK(tmu->triples() == 51480);  // 15 * C(14,7)
  auto mu = make_mu(15, 3);
  Bits x(15, {0, 1, 2});
  Bits y0(15, {3, 4, 5}), y1(15, {0, 3, 4});
  CHECK(tmu->mass(x, y0) == doctest::Approx(mu->mass(x, y0)).epsilon(1e-12));
  CHECK(tmu->mass(x, y1) == doctest::Approx(mu->mass(x, y1)).epsilon(1e-12));
  CHECK(tmu->mass(x, y0) == doctest::Approx(3.0 / 400400).epsilon(1e-12));
  CHECK(tmu->mass(x, y1) == doctest::Approx(1.0 / 360360).epsilon(1e-12));
}

TEST_CASE("triple-form sampler: empirical law") {
  auto tmu = make_triple_mu(15, 3);
  Rng rng(23);
  int disj = 0;
  const int T = 30000;
  for (int t = 0; t < T; ++t) {
    auto [x, y] = tmu->sample(rng);
    REQUIRE(x.count() == 3);
    REQUIRE(y.count() == 3);
    const uint32_t c = (x & y).count();
    REQUIRE(c <= 1);
    disj += (c == 0);
  }
  CHECK(disj / double(T) == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("triple form needs n = 4l-1") {
  CHECK_THROWS_AS(make_triple_mu(16, 3), ConfigError);
  CHECK_NOTHROW(make_triple_mu(15, 3));
  CHECK_NOTHROW(make_triple_mu(31, 6));
}

TEST_CASE("tau mixes the hard law with its product shadow") {
  auto tau = std::dynamic_pointer_cast<const MixtureImpl>(make_tau(15, 2));
  REQUIRE(tau);
  REQUIRE(tau->components().size() == 2);
  CHECK(tau->components()[0].first == doctest::Approx(0.25));
  CHECK(tau->components()[1].first == doctest::Approx(0.75));
  // marginals stay uniform over 4-subsets
  CHECK(tau->marginal_a()->mass(Bits(15, {0, 1, 2, 3})) ==
        doctest::Approx(1.0 / stats::choose_u64(15, 4)).epsilon(1e-9));
  // mixture mass = 0.25*mu + 0.75*rho pointwise
  auto mu = make_mu(15, 4);
  Bits x(15, {0, 1, 2, 3}), y(15, {4, 5, 6, 7});
  const double rho_m = 1.0 / (1365.0 * 1365.0);
  CHECK(tau->mass(x, y) == doctest::Approx(0.25 * mu->mass(x, y) + 0.75 * rho_m).epsilon(1e-9));
  CHECK_THROWS_AS(make_tau(15, 0.25), ConfigError);
}
