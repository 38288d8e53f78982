#include <cmath>
#include <map>
#include <vector>

#include "commlab/info.hpp"
#include "commlab/razborov.hpp"
#include "doctest.h"

using namespace commlab;

namespace {

Bits b1(uint64_t v) { return Bits::from_low64(1, v); }

dist::BipartiteDist bool_joint(double p00, double p01, double p10, double p11) {
  std::vector<std::tuple<Bits, Bits, double>> sup;
  const double p[2][2] = {{p00, p01}, {p10, p11}};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (p[x][y] > 0) sup.emplace_back(b1(x), b1(y), p[x][y]);
  return dist::make_explicit(1, std::move(sup), true);
}

dist::BipartiteDist random_joint(Rng& rng, uint32_t n, bool full_support) {
  std::vector<std::tuple<Bits, Bits, double>> sup;
  const uint64_t side = uint64_t{1} << n;
  for (uint64_t a = 0; a < side; ++a)
    for (uint64_t b = 0; b < side; ++b) {
      if (!full_support && rng.next_bit()) continue;
      sup.emplace_back(Bits::from_low64(n, a), Bits::from_low64(n, b), rng.next_double() + 1e-4);
    }
  if (sup.empty()) sup.emplace_back(Bits(n), Bits(n), 1.0);
  return dist::make_explicit(n, std::move(sup), true);
}

// reference computation straight from the definitions, nothing shared with
// the streaming implementation
double reference_info(const dist::BipartiteDist& d) {
  std::map<Bits, double> ma, mb;
  std::vector<std::tuple<Bits, Bits, double>> sup;
  d->for_each_support([&](const Bits& x, const Bits& y, double m) {
    sup.emplace_back(x, y, m);
    ma[x] += m;
    mb[y] += m;
  });
  double info = 0;
  for (auto& [x, y, m] : sup)
    if (m > 0) info += m * std::log2(m / (ma[x] * mb[y]));
  return info;
}

}  // namespace

TEST_CASE("divergence suite matches reference on random joints") {
  Rng rng(2026);
  for (int t = 0; t < 40; ++t) {
    auto d = random_joint(rng, 2, t % 2 == 0);
    auto rep = info::divergence_suite(d);
    CHECK(rep.I == doctest::Approx(reference_info(d)).epsilon(1e-9));
    CHECK(rep.D == doctest::Approx(rep.I).epsilon(1e-9));
    CHECK(rep.I <= rep.I_inf + 1e-9);
    CHECK(rep.finite);
  }
}

TEST_CASE("product distribution carries zero information") {
  auto a = std::make_shared<dist::EnumerableMarginal>(
      2, std::vector<std::pair<Bits, double>>{{Bits::from_low64(2, 0), 0.3},
                                              {Bits::from_low64(2, 1), 0.25},
                                              {Bits::from_low64(2, 2), 0.45}});
  auto b = std::make_shared<dist::EnumerableMarginal>(
      2, std::vector<std::pair<Bits, double>>{{Bits::from_low64(2, 1), 0.6},
                                              {Bits::from_low64(2, 3), 0.4}});
  auto rep = info::divergence_suite(dist::make_product(a, b));
  CHECK(rep.I == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::fabs(rep.I_inf) < 1e-9);
}

TEST_CASE("perfectly correlated bit carries one bit") {
  auto d = bool_joint(0.5, 0, 0, 0.5);
  auto rep = info::divergence_suite(d);
  CHECK(rep.I == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.I_inf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("explicit sigma: D against the marginal product equals I") {
  Rng rng(7);
  auto d = random_joint(rng, 2, true);
  auto sigma = dist::make_product(d->marginal_a(), d->marginal_b());
  auto rep = info::divergence_suite(d, sigma);
  auto self = info::divergence_suite(d);
  CHECK(rep.D == doctest::Approx(self.I).epsilon(1e-9));
  CHECK(rep.D_inf == doctest::Approx(self.I_inf).epsilon(1e-9));
  CHECK(rep.finite);
}

TEST_CASE("support violation reports a witness instead of throwing") {
  auto mu = bool_joint(0.5, 0, 0, 0.5);
  auto sigma = bool_joint(1.0, 0, 0, 0);
  auto rep = info::divergence_suite(mu, sigma);
  CHECK_FALSE(rep.finite);
  CHECK(std::isinf(rep.D));
  CHECK(std::isinf(rep.D_inf));
  CHECK(rep.witness_x == b1(1));
  CHECK(rep.witness_y == b1(1));
  // I is still computed
  CHECK(rep.I == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("streamed information matches the closed form for the hard family") {
  auto mu = dist::make_mu_nk(15, 1.0);
  auto rep = info::divergence_suite(mu);
  CHECK(rep.I == doctest::Approx(dist::mu_info_closed_form(15, 3)).epsilon(1e-9));
}

TEST_CASE("substate truncation: dropped mass, threshold semantics, renormalization") {
  Rng rng(99);
  for (int t = 0; t < 25; ++t) {
    auto d = random_joint(rng, 3, true);  // 8x8 full support
    const double eps = 0.25;
    auto rep = info::substate_truncate_report(d, eps);
    REQUIRE(rep.out);

    // dropped mass is the exact TV distance
    double tv = 0;
    d->for_each_support([&](const Bits& x, const Bits& y, double m) {
      tv += std::fabs(m - rep.out->mass(x, y));
    });
    tv /= 2;
    CHECK(rep.tv == doctest::Approx(tv).epsilon(1e-9));
    CHECK(rep.tv <= eps + 1e-12);

    // kept points sit at or below the cut, dropped points above it
    auto ma = d->marginal_a();
    auto mb = d->marginal_b();
    d->for_each_support([&](const Bits& x, const Bits& y, double m) {
      const double ratio = std::log2(m / (ma->mass(x) * mb->mass(y)));
      if (rep.out->mass(x, y) > 0)
        CHECK(ratio <= rep.threshold_bits + 1e-9);
      else
        CHECK(ratio > rep.threshold_bits - 1e-12);
    });

    // renormalized
    double total = 0;
    rep.out->for_each_support([&](const Bits&, const Bits&, double m) { total += m; });
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // the advertised bound
    auto out_rep = info::divergence_suite(rep.out);
    CHECK(out_rep.I_inf <= 4.0 * (rep.info_in + 1.0) / eps + 1e-9);
  }
}

TEST_CASE("substate truncation leaves a product distribution untouched") {
  auto a = std::make_shared<dist::BernoulliMarginal>(10, 0.3);
  auto b = std::make_shared<dist::BernoulliMarginal>(10, 0.2);
  auto d = dist::make_product(a, b);
  auto rep = info::substate_truncate_report(d, 0.25);
  CHECK(rep.out.get() == d.get());
  CHECK(rep.tv == 0.0);
  CHECK(rep.threshold_bits == 0.0);
}

TEST_CASE("substate truncation on the correlated bit keeps everything") {
  // both support points share the same positive log-ratio; dropping the group
  // would lose mass 1 > eps, so nothing moves
  auto d = bool_joint(0.5, 0, 0, 0.5);
  auto rep = info::substate_truncate_report(d, 0.5);
  CHECK(rep.tv == 0.0);
  auto out_rep = info::divergence_suite(rep.out);
  CHECK(out_rep.I_inf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out_rep.I_inf <= 4.0 * (rep.info_in + 1.0) / 0.5);
}

TEST_CASE("substate truncation: a looser eps budget never raises the cut") {
  // the kept sets are nested as eps grows, so the realized truncation ceiling
  // (highest surviving log-ratio) is non-increasing; the advertised bound
  // holds at every step.  NOTE: I_inf of the *renormalized* output against
  // its own recomputed marginals is NOT monotone in eps (renormalization and
  // marginal shrinkage push it up), so the ceiling is the right dial.
  Rng rng(1234);
  for (int t = 0; t < 10; ++t) {
    auto d = random_joint(rng, 3, true);
    double prev_cut = std::numeric_limits<double>::infinity();
    for (double eps : {0.05, 0.1, 0.2, 0.35, 0.5, 0.7, 0.9}) {
      auto rep = info::substate_truncate_report(d, eps);
      CHECK(rep.threshold_bits <= prev_cut + 1e-12);
      prev_cut = rep.threshold_bits;
      CHECK(rep.tv <= eps + 1e-12);
      CHECK(info::divergence_suite(rep.out).I_inf <= 4 * (rep.info_in + 1) / eps + 1e-9);
    }
  }
}

TEST_CASE("substate truncation rejects eps outside (0,1)") {
  auto d = bool_joint(0.25, 0.25, 0.25, 0.25);
  CHECK_THROWS_AS(info::substate_truncate(d, 0.0), ConfigError);
  CHECK_THROWS_AS(info::substate_truncate(d, 1.0), ConfigError);
  CHECK_THROWS_AS(info::substate_truncate(d, -0.3), ConfigError);
  CHECK_THROWS_AS(info::substate_truncate(d, 1.5), ConfigError);
}

TEST_CASE("truncated distribution samples from its own law") {
  Rng rng(555);
  auto d = random_joint(rng, 2, true);
  auto out = info::substate_truncate(d, 0.4);
  const int kDraws = 40000;
  std::map<std::pair<uint64_t, uint64_t>, int> freq;
  Rng srng(77);
  for (int i = 0; i < kDraws; ++i) {
    auto [x, y] = out->sample(srng);
    ++freq[{x.low64(), y.low64()}];
  }
  out->for_each_support([&](const Bits& x, const Bits& y, double m) {
    const double emp = freq[{x.low64(), y.low64()}] / double(kDraws);
    const double sd = std::sqrt(m * (1 - m) / kDraws);
    CHECK(std::fabs(emp - m) < 5 * sd + 1e-3);
  });
  // marginals renormalized
  double tot = 0;
  out->marginal_a()->for_each_support([&](const Bits&, double m) { tot += m; });
  CHECK(tot == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("log-sum inequality holds across random instances") {
  Rng rng(31337);
  for (int t = 0; t < 200; ++t) {
    auto mu = random_joint(rng, 2, false);
    auto sigma = random_joint(rng, 2, false);
    const uint64_t mask = rng.next();
    info::PairPred event = [mask](const Bits& x, const Bits& y) {
      return (mask >> ((x.low64() << 2) | y.low64())) & 1;
    };
    auto res = info::lemma_log_sum(mu, sigma, event);
    CHECK(res.holds);
  }
}

TEST_CASE("log-sum inequality: empty event and whole-space event") {
  auto mu = bool_joint(0.4, 0.1, 0.1, 0.4);
  auto sigma = bool_joint(0.25, 0.25, 0.25, 0.25);
  auto none = info::lemma_log_sum(mu, sigma, [](const Bits&, const Bits&) { return false; });
  CHECK(none.holds);
  CHECK(none.lhs == 0.0);
  CHECK(none.rhs == 0.0);
  auto all = info::lemma_log_sum(mu, sigma, [](const Bits&, const Bits&) { return true; });
  CHECK(all.holds);
  // whole space: lhs is D(mu||sigma), rhs is max(-1, 0)
  CHECK(all.rhs == doctest::Approx(0.0));
  CHECK(all.lhs == doctest::Approx(info::divergence_suite(mu, sigma).D).epsilon(1e-9));
}

TEST_CASE("restriction bound holds across random instances") {
  Rng rng(60601);
  int ran = 0;
  for (int t = 0; t < 300 && ran < 200; ++t) {
    auto mu = random_joint(rng, 2, true);
    auto sigma = random_joint(rng, 2, true);  // full support keeps D finite
    const uint64_t mask = rng.next() | 1;     // nonempty event
    info::PairPred event = [mask](const Bits& x, const Bits& y) {
      return (mask >> ((x.low64() << 2) | y.low64())) & 1;
    };
    auto res = info::lemma_restriction(mu, sigma, event);
    if (!res.hypothesis_ok) continue;
    ++ran;
    CHECK(res.holds);
  }
  CHECK(ran == 200);
}

TEST_CASE("restriction bound reports zero-mass events as hypothesis failures") {
  auto mu = bool_joint(0.5, 0.5, 0, 0);
  auto sigma = bool_joint(0.25, 0.25, 0.25, 0.25);
  auto res = info::lemma_restriction(mu, sigma,
                                     [](const Bits& x, const Bits&) { return x.get(0); });
  CHECK_FALSE(res.hypothesis_ok);
}

TEST_CASE("depressed-intersection bound (marginal form) on random satisfying instances") {
  Rng rng(424242);
  int ran = 0;
  for (int t = 0; t < 4000 && ran < 400; ++t) {
    double p[4] = {rng.next_double(), rng.next_double(), rng.next_double(),
                   0.25 * rng.next_double()};
    const double s = p[0] + p[1] + p[2] + p[3];
    auto mu = bool_joint(p[0] / s, p[1] / s, p[2] / s, p[3] / s);
    auto res = info::lemma_depression_half(mu);
    if (!res.hypothesis_ok) continue;
    ++ran;
    CHECK(res.holds);
  }
  CHECK(ran == 400);
}

TEST_CASE("depressed-intersection bound flags hypothesis violations") {
  // muA(1) muB(1) = 0.25 < 2 mu(1,1) = 0.9
  auto mu = bool_joint(0.45, 0.05, 0.05, 0.45);
  auto res = info::lemma_depression_half(mu);
  CHECK_FALSE(res.hypothesis_ok);
}

TEST_CASE("depressed-intersection bound (product form) on random satisfying instances") {
  Rng rng(515151);
  int ran = 0;
  for (int t = 0; t < 6000 && ran < 400; ++t) {
    double p[4] = {rng.next_double(), rng.next_double(), rng.next_double(),
                   0.1 * rng.next_double()};
    const double s = p[0] + p[1] + p[2] + p[3];
    auto mu = bool_joint(p[0] / s, p[1] / s, p[2] / s, p[3] / s);
    const double sa = 0.05 + 0.9 * rng.next_double();
    const double sb = 0.05 + 0.9 * rng.next_double();
    auto a = std::make_shared<dist::EnumerableMarginal>(
        1, std::vector<std::pair<Bits, double>>{{b1(0), 1 - sa}, {b1(1), sa}});
    auto b = std::make_shared<dist::EnumerableMarginal>(
        1, std::vector<std::pair<Bits, double>>{{b1(0), 1 - sb}, {b1(1), sb}});
    auto res = info::lemma_depression_product(mu, dist::make_product(a, b));
    if (!res.hypothesis_ok) continue;
    ++ran;
    CHECK(res.holds);
  }
  CHECK(ran == 400);
}

TEST_CASE("rectangle partitions never gain information") {
  Rng rng(818181);
  for (int t = 0; t < 100; ++t) {
    auto d = random_joint(rng, 2, t % 3 != 0);
    // two coin branches, each a random grid partition (grids are rectangle
    // partitions by construction)
    auto grid = [&rng]() {
      auto rg = std::make_shared<std::array<uint64_t, 4>>();
      auto cg = std::make_shared<std::array<uint64_t, 4>>();
      for (int i = 0; i < 4; ++i) {
        (*rg)[i] = rng.next_below(3);
        (*cg)[i] = rng.next_below(3);
      }
      return [rg, cg](const Bits& x, const Bits& y) -> uint64_t {
        return (*rg)[x.low64()] * 8 + (*cg)[y.low64()];
      };
    };
    std::vector<info::CoinBranch> branches{{0.4, grid()}, {0.6, grid()}};
    auto res = info::lemma_partition_monotone(d, branches);
    REQUIRE(res.hypothesis_ok);
    CHECK(res.holds);
  }
}

TEST_CASE("the trivial one-rectangle partition leaves information exactly unchanged") {
  Rng rng(90909);
  auto d = random_joint(rng, 2, true);
  std::vector<info::CoinBranch> branches{
      {1.0, [](const Bits&, const Bits&) -> uint64_t { return 0; }}};
  auto res = info::lemma_partition_monotone(d, branches);
  REQUIRE(res.hypothesis_ok);
  CHECK(res.holds);
  CHECK(res.lhs == doctest::Approx(res.rhs).epsilon(1e-12));
}

TEST_CASE("non-rectangle labelings are rejected as hypothesis failures") {
  auto d = bool_joint(0.3, 0.2, 0.2, 0.3);
  std::vector<info::CoinBranch> branches{
      {1.0, [](const Bits& x, const Bits& y) -> uint64_t { return x == y ? 0 : 1; }}};
  auto res = info::lemma_partition_monotone(d, branches);
  CHECK_FALSE(res.hypothesis_ok);
}

TEST_CASE("branch weights must form a distribution") {
  auto d = bool_joint(0.3, 0.2, 0.2, 0.3);
  std::vector<info::CoinBranch> branches{
      {0.5, [](const Bits&, const Bits&) -> uint64_t { return 0; }}};
  auto res = info::lemma_partition_monotone(d, branches);
  CHECK_FALSE(res.hypothesis_ok);
}

TEST_CASE("conditional information: exact value on a hand-built split") {
  // uniform on {0,1}^2 x {0,1}^2 restricted to matching halves: X and Y agree
  // on bit 1 (two 2x2 blocks), uniform inside each block.
  std::vector<std::tuple<Bits, Bits, double>> sup;
  for (uint64_t a = 0; a < 4; ++a)
    for (uint64_t b = 0; b < 4; ++b)
      if ((a >> 1) == (b >> 1))
        sup.emplace_back(Bits::from_low64(2, a), Bits::from_low64(2, b), 0.125);
  auto d = dist::make_explicit(2, std::move(sup));
  // I(X:Y) = 1 bit (the shared half-bit)
  CHECK(info::divergence_suite(d).I == doctest::Approx(1.0).epsilon(1e-12));
  // conditioning on the block wipes it out
  std::vector<info::CoinBranch> branches{
      {1.0, [](const Bits& x, const Bits&) -> uint64_t { return x.get(1); }}};
  CHECK(info::conditional_info_over_partition(d, branches) ==
        doctest::Approx(0.0).epsilon(1e-12));
  auto res = info::lemma_partition_monotone(d, branches);
  REQUIRE(res.hypothesis_ok);
  CHECK(res.holds);
  CHECK(res.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.rhs == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("substate truncation streams a large support without materializing it") {
  auto mu = dist::make_mu_nk(15, 1.0);
  auto rep = info::substate_truncate_report(mu, 0.25);
  // every pair in one orbit shares one log-ratio; the positive orbit holds
  // mass 3/4 > eps, so the distribution survives intact
  CHECK(rep.tv == 0.0);
  CHECK(rep.out.get() == mu.get());
  CHECK(info::divergence_suite(rep.out).I_inf <= 4 * (rep.info_in + 1) / 0.25);
}
