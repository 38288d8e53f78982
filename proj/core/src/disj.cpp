#include "commlab/disj.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "commlab/elias.hpp"
#include "commlab/errors.hpp"
#include "commlab/info.hpp"
#include "commlab/razborov.hpp"

namespace commlab::disj {

namespace {

Bits random_bits(Rng& rng, uint32_t n) {
  Bits b(n);
  for (uint32_t w = 0; w < b.num_words(); ++w) b.word(w) = rng.next();
  if (n & 63) b.word(b.num_words() - 1) &= (uint64_t(1) << (n & 63)) - 1;
  return b;
}

bool parity(const Bits& a, const Bits& b) {
  uint32_t acc = 0;
  for (uint32_t w = 0; w < a.num_words(); ++w)
    acc ^= static_cast<uint32_t>(std::popcount(a.word(w) & b.word(w)));
  return acc & 1;
}

void check_eps(double eps, const char* who) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError(std::string(who) + ": eps must be in (0,1)");
}

// Charge nbits of zero filler; used when a rank is too large to materialize
// but its code length is known.
void charge_bits(ProtoIO& io, Party who, uint64_t nbits) {
  while (nbits > 0) {
    const uint32_t t = static_cast<uint32_t>(std::min<uint64_t>(32, nbits));
    io.send_word(who, 0, t);
    nbits -= t;
  }
}

// ----- small-set disjointness ------------------------------------------------

// Compression keep-rate for the non-covered side.
constexpr uint64_t kRhoDen = 4;

int smallset_run(const Bits& xs0, const Bits& ys0, uint32_t s, double eps, RunCtx& ctx,
                 ProtoIO& io) {
  if (s == 0) throw ConfigError("smallset_disj: s must be positive");
  check_eps(eps, "smallset_disj");
  Bits xs = xs0, ys = ys0;
  if (xs.count() > s || ys.count() > s)
    throw ConfigError("smallset_disj: input set exceeds the size bound");

  const uint32_t c0 = std::max<uint32_t>(2, (s + 1) / 2);  // verbatim threshold
  const uint32_t fp_k =
      std::max<uint32_t>(1, static_cast<uint32_t>(std::ceil(std::log2(2.0 / eps))));
  const uint32_t r_max = 2 * static_cast<uint32_t>(std::ceil(std::log2(std::max(s, 2u)))) +
                         static_cast<uint32_t>(std::ceil(std::log2(1.0 / eps))) + 4;
  // element names live in a range wide enough that cross-collisions stay
  // under eps/2 for two sets of size <= s
  const uint64_t name_range =
      std::max<uint64_t>(16, static_cast<uint64_t>(std::ceil(2.0 * s * s / eps)));
  const uint32_t name_w = static_cast<uint32_t>(std::bit_width(name_range - 1));
  const uint64_t name_key = ctx.pub.next();
  auto name_of = [&](uint32_t i) {
    return mix64(name_key ^ ((i + 1) * 0x9e3779b97f4a7c15ULL)) % name_range;
  };

  for (uint32_t round = 0; round < r_max; ++round) {
    const bool alice = (round % 2) == 0;
    Bits& lead = alice ? xs : ys;
    Bits& peer_set = alice ? ys : xs;
    const Party who = alice ? Party::Alice : Party::Bob;
    const Party peer = other(who);

    if (lead.count() <= c0) {
      // verbatim finish: marker, count, named elements
      io.send_elias(who, 0);
      const auto idx = lead.to_indices();
      io.send_elias(who, idx.size());
      std::vector<uint64_t> sent;
      sent.reserve(idx.size());
      for (uint32_t i : idx) {
        const uint64_t nm = name_of(i);
        io.send_word(who, nm, name_w);
        sent.push_back(nm);
      }
      std::sort(sent.begin(), sent.end());
      bool hit = false;
      peer_set.for_each_set([&](uint32_t i) {
        hit = hit || std::binary_search(sent.begin(), sent.end(), name_of(i));
      });
      io.send_bit(peer, !hit);
      // confirmation echo: fp_k folded parities of the received name list
      uint64_t h = 0x5eedf01d;
      for (uint64_t nm : sent) h = mix64(h ^ nm);
      for (uint32_t j = 0; j < fp_k; ++j) io.send_bit(peer, (h >> (j & 63)) & 1);
      return hit ? 0 : 1;
    }

    // compress: rank of the first public random subset covering lead
    const uint32_t big = lead.count();
    double u = ctx.pub.next_double();
    if (u <= 0) u = 0x1.0p-53;
    if (big <= 9) {
      const double p = std::pow(1.0 / kRhoDen, big);
      uint64_t rank = static_cast<uint64_t>(std::ceil(std::log(u) / std::log1p(-p)));
      rank = std::clamp<uint64_t>(rank, 1, uint64_t(1) << 62);
      io.send_elias(who, rank);
    } else {
      // same geometric law, charged by code length only
      const double lg_rank = std::log2(-std::log(u)) + 2.0 * big;
      const uint32_t nbits = lg_rank < 0 ? 0 : static_cast<uint32_t>(lg_rank);
      const uint32_t lw = static_cast<uint32_t>(std::bit_width(nbits + 1)) - 1;
      charge_bits(io, who, nbits + 2 * lw + 1);
    }
    // the covering subset keeps all of lead, thins the rest to 1/kRhoDen
    Bits kept = peer_set & lead;
    peer_set.minus(lead).for_each_set([&](uint32_t i) {
      if (ctx.pub.next_below(kRhoDen) == 0) kept.set(i);
    });
    peer_set = kept;
  }
  return 0;  // sets refused to shrink: overwhelming evidence of intersection
}

// ----- shrink-phase conditioning models --------------------------------------

struct ExactSpec {
  struct Entry {
    Bits x, y;
    double m;
  };
  uint32_t n = 0;
  std::vector<Entry> entries;
  std::unordered_map<Bits, std::vector<uint32_t>, BitsHash> by_row;
};

using ExactSpecPtr = std::shared_ptr<const ExactSpec>;

ExactSpecPtr build_exact_spec(const dist::BipartiteDist& mu) {
  auto spec = std::make_shared<ExactSpec>();
  spec->n = mu->n();
  mu->for_each_support([&](const Bits& x, const Bits& y, double m) {
    if (m <= 0) return;
    spec->by_row[x].push_back(static_cast<uint32_t>(spec->entries.size()));
    spec->entries.push_back({x, y, m});
  });
  return spec;
}

// Per-run view of an enumerable distribution under transcript conditioning.
class ExactState {
 public:
  explicit ExactState(ExactSpecPtr spec) : spec_(std::move(spec)), alive_(spec_->entries.size(), 1) {}

  // deterministic size-announcement bits cut a true sub-rectangle
  void note_size_bits(const Bits& universe, uint32_t S, bool bit_a, bool bit_b) {
    for (size_t i = 0; i < alive_.size(); ++i) {
      if (!alive_[i]) continue;
      const auto& e = spec_->entries[i];
      if (((e.x & universe).count() > S) != bit_a || ((e.y & universe).count() > S) != bit_b)
        alive_[i] = 0;
    }
  }

  double row_disjoint_prob(const Bits& x, const Bits& xhat) const {
    auto it = spec_->by_row.find(x);
    if (it == spec_->by_row.end()) return 0.0;
    double num = 0, den = 0;
    for (uint32_t i : it->second) {
      if (!alive_[i]) continue;
      const auto& e = spec_->entries[i];
      den += e.m;
      if (!e.y.intersects(xhat)) num += e.m;
    }
    return den > 0 ? num / den : 0.0;
  }

  // swap_sides mirrors the roles when Bob is the shrinking party
  Bits transmit_disjoint(const Bits& own_row, const Bits& own_set, bool swap_sides, RunCtx& ctx,
                         ProtoIO& io, Party sender) const {
    std::map<Bits, std::pair<double, double>> cols;  // opponent value -> (base, target)
    for (size_t i = 0; i < alive_.size(); ++i) {
      if (!alive_[i]) continue;
      const auto& e = spec_->entries[i];
      const Bits& mine = swap_sides ? e.y : e.x;
      const Bits& theirs = swap_sides ? e.x : e.y;
      auto& cell = cols[theirs];
      cell.first += e.m;
      if (mine == own_row && !theirs.intersects(own_set)) cell.second += e.m;
    }
    std::vector<double> base, target;
    std::vector<const Bits*> values;
    base.reserve(cols.size());
    target.reserve(cols.size());
    for (auto& [v, masses] : cols) {
      values.push_back(&v);
      base.push_back(masses.first);
      target.push_back(masses.second);
    }
    const auto res = hjmr_transmit(target, base, ctx, io, sender);
    return *values[res.index];
  }

  void fill(PhaseState& st) const {
    std::map<Bits, char> rows, cols;
    std::vector<std::tuple<Bits, Bits, double>> sup;
    for (size_t i = 0; i < alive_.size(); ++i) {
      if (!alive_[i]) continue;
      const auto& e = spec_->entries[i];
      rows[e.x] = 1;
      cols[e.y] = 1;
      if (sup.size() <= 20000) sup.emplace_back(e.x, e.y, e.m);
    }
    st.rows.clear();
    st.cols.clear();
    for (auto& [x, _] : rows) st.rows.push_back(x);
    for (auto& [y, _] : cols) st.cols.push_back(y);
    st.conditioned =
        sup.size() <= 20000 && !sup.empty() ? dist::make_explicit(spec_->n, sup, true) : nullptr;
  }

 private:
  ExactSpecPtr spec_;
  std::vector<char> alive_;
};

// Candidate scan against a known marginal: public draws until one misses
// own_set, rank announced.  Returns the accepted sample; empty optional means
// the scan gave up (treated as an early rejection by callers).
struct ScanResult {
  Bits sample;
  bool ok = false;
};

ScanResult scan_disjoint(const dist::Marginal& marg, const Bits& own_set, double eps, RunCtx& ctx,
                         ProtoIO& io, Party sender) {
  const uint64_t cap = static_cast<uint64_t>(std::ceil(64.0 / eps));
  for (uint64_t j = 1; j <= cap; ++j) {
    Bits cand = marg->sample(ctx.pub);
    if (!cand.intersects(own_set)) {
      io.send_elias(sender, j);
      return {std::move(cand), true};
    }
  }
  return {};
}

double marginal_disjoint_prob(const dist::Marginal& marg, const Bits& s, double eps, Rng& pub) {
  try {
    return marg->prob_disjoint(s);
  } catch (const Error&) {
    // public-coin estimate; both parties run the same draws for free
    const uint64_t trials = static_cast<uint64_t>(std::ceil(4.0 / (eps * eps)));
    uint64_t hits = 0;
    for (uint64_t t = 0; t < trials; ++t)
      if (!marg->sample(pub).intersects(s)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(trials);
  }
}

uint32_t word_width(uint32_t n) { return std::max<uint32_t>(1, std::bit_width(std::max(n, 2u) - 1)); }

RunResult coin_flip_abort(RunCtx& ctx, uint64_t cap) {
  RunResult r;
  r.aborted = true;
  r.output = ctx.priv_a.next_bit() ? 1 : 0;
  r.charged_cost = static_cast<double>(cap);
  return r;
}

}  // namespace

// ----- fingerprint equality ---------------------------------------------------

NamedProtocol fingerprint_equality(uint32_t k) {
  if (k < 1) throw ConfigError("fingerprint_equality: k must be >= 1");
  NamedProtocol p;
  p.name = "fingerprint_eq[k=" + std::to_string(k) + "]";
  p.n = 0;
  p.run = [k](const Bits& x, const Bits& y, RunCtx& ctx, uint64_t cap) {
    if (x.size() != y.size()) throw ConfigError("fingerprint_equality: length mismatch");
    ProtoIO io(cap);
    bool all_match = true;
    for (uint32_t j = 0; j < k; ++j) {
      const Bits r = random_bits(ctx.pub, x.size());
      const bool a = parity(x, r);
      io.send_bit(Party::Alice, a);
      all_match = all_match && a == parity(y, r);
    }
    RunResult res;
    res.output = all_match ? 1 : 0;
    res.transcript = io.take();
    return res;
  };
  return p;
}

// ----- correlated-sample transmission ----------------------------------------

TransmitResult hjmr_transmit(const std::vector<double>& target, const std::vector<double>& base,
                             RunCtx& ctx, ProtoIO& io, Party sender, uint64_t step_cap) {
  const size_t n = target.size();
  if (n == 0 || base.size() != n) throw ConfigError("hjmr_transmit: mismatched supports");
  double tsum = 0, bsum = 0;
  for (size_t i = 0; i < n; ++i) {
    if (target[i] < 0 || base[i] < 0) throw ConfigError("hjmr_transmit: negative mass");
    if (target[i] > 0 && base[i] <= 0)
      throw ConfigError("hjmr_transmit: target mass outside the base support");
    tsum += target[i];
    bsum += base[i];
  }
  if (tsum <= 0 || bsum <= 0) throw ConfigError("hjmr_transmit: empty distribution");

  // mu/nu normalized; claimed mass follows the closed form min(mu, c*nu)
  // with a scalar c advanced by the unclaimed remainder each step
  std::vector<double> mu(n), nu(n);
  for (size_t i = 0; i < n; ++i) {
    mu[i] = target[i] / tsum;
    nu[i] = base[i] / bsum;
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double ra = nu[a] > 0 ? mu[a] / nu[a] : 0.0;
    const double rb = nu[b] > 0 ? mu[b] / nu[b] : 0.0;
    return ra < rb;
  });
  std::vector<double> ratio_sorted(n), mu_prefix(n + 1, 0), nu_prefix(n + 1, 0);
  for (size_t j = 0; j < n; ++j) {
    const size_t i = order[j];
    ratio_sorted[j] = nu[i] > 0 ? mu[i] / nu[i] : 0.0;
    mu_prefix[j + 1] = mu_prefix[j] + mu[i];
    nu_prefix[j + 1] = nu_prefix[j] + nu[i];
  }
  auto claimed = [&](double c) {
    const size_t j =
        std::upper_bound(ratio_sorted.begin(), ratio_sorted.end(), c) - ratio_sorted.begin();
    return std::min(1.0, mu_prefix[j] + c * (nu_prefix[n] - nu_prefix[j]));
  };
  std::vector<double> cum(n + 1, 0);
  for (size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + nu[i];

  Rng& accept_rng = sender == Party::Alice ? ctx.priv_a : ctx.priv_b;
  double c = 1.0;
  for (uint64_t rank = 1; rank <= step_cap; ++rank) {
    const double m_prev = claimed(c);
    const double u = ctx.pub.next_double() * cum[n];
    const size_t s = std::min<size_t>(
        n - 1, std::upper_bound(cum.begin() + 1, cum.end(), u) - (cum.begin() + 1));
    double accept;
    if (1.0 - m_prev <= 1e-12) {
      accept = mu[s] > 0 ? 1.0 : 0.0;  // the residual process has measure ~0
    } else {
      const double c_next = c + (1.0 - m_prev);
      const double p_prev = std::min(mu[s], c * nu[s]);
      const double p_next = std::min(mu[s], c_next * nu[s]);
      accept = nu[s] > 0 ? (p_next - p_prev) / ((1.0 - m_prev) * nu[s]) : 0.0;
      c = c_next;
    }
    if (accept_rng.next_double() < accept) {
      io.send_elias(sender, rank);
      return {s, rank};
    }
  }
  throw AbortRun{};
}

// ----- small-set disjointness -------------------------------------------------

NamedProtocol smallset_disj(uint32_t s, double eps) {
  if (s == 0) throw ConfigError("smallset_disj: s must be positive");
  check_eps(eps, "smallset_disj");
  NamedProtocol p;
  p.name = "smallset[s=" + std::to_string(s) + "]";
  p.n = 0;
  p.run = [s, eps](const Bits& x, const Bits& y, RunCtx& ctx, uint64_t cap) {
    ProtoIO io(cap);
    RunResult res;
    res.output = smallset_run(x, y, s, eps, ctx, io);
    res.transcript = io.take();
    return res;
  };
  return p;
}

// ----- product-distribution DISJ ----------------------------------------------

NamedProtocol disj_product(const dist::BipartiteDist& mu, double eps, PhaseObserver obs) {
  if (!mu) throw ConfigError("disj_product: null distribution");
  check_eps(eps, "disj_product");
  if (!mu->is_product()) throw ConfigError("disj_product: distribution is not a product");
  const uint32_t n = mu->n();
  const uint32_t S = static_cast<uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const uint64_t own_cap = static_cast<uint64_t>(
      std::ceil(6.0 * std::sqrt(static_cast<double>(n)) * (1.0 + std::log2(1.0 / eps))));
  auto ma = mu->marginal_a();
  auto mb = mu->marginal_b();

  NamedProtocol p;
  p.name = "disj_product[n=" + std::to_string(n) + "]";
  p.n = n;
  p.run = [=](const Bits& x, const Bits& y, RunCtx& ctx, uint64_t cap) {
    const uint64_t eff_cap = cap && cap < own_cap ? cap : own_cap;
    ProtoIO io(eff_cap);
    try {
      Bits universe = random_bits(ctx.pub, 0);  // placeholder, replaced below
      universe = Bits(n);
      for (uint32_t i = 0; i < n; ++i) universe.set(i);
      uint32_t draws = 0;
      const uint32_t iter_cap = 2 * ((n + S - 1) / S) + 8;
      for (uint32_t iter = 0;; ++iter) {
        if (iter >= iter_cap) throw AbortRun{};
        const Bits xhat = x & universe, yhat = y & universe;
        const bool big_a = xhat.count() > S, big_b = yhat.count() > S;
        io.send_bit(Party::Alice, big_a);
        io.send_bit(Party::Bob, big_b);
        if (!big_a && !big_b) {
          if (obs) obs(PhaseState{universe, {}, {}, nullptr, draws});
          RunResult res;
          res.output = smallset_run(xhat, yhat, S, eps / 2, ctx, io);
          res.transcript = io.take();
          return res;
        }
        // both sides gate on the chance their opponent misses them
        const bool rej_a = marginal_disjoint_prob(mb, xhat, eps, ctx.pub) < eps;
        io.send_bit(Party::Alice, rej_a);
        const bool rej_b = marginal_disjoint_prob(ma, yhat, eps, ctx.pub) < eps;
        io.send_bit(Party::Bob, rej_b);
        if (rej_a || rej_b) {
          RunResult res;
          res.output = 0;
          res.transcript = io.take();
          return res;
        }
        // the party facing the large opponent scans for a disjoint sample
        const bool alice_leads = big_b;
        uint32_t removed = 0, stall = 0;
        while (removed < S && stall < 128) {
          ScanResult got =
              alice_leads
                  ? scan_disjoint(mb, x & universe, eps, ctx, io, Party::Alice)
                  : scan_disjoint(ma, y & universe, eps, ctx, io, Party::Bob);
          if (!got.ok) {
            RunResult res;  // no disjoint candidate in sight: reject
            res.output = 0;
            res.transcript = io.take();
            return res;
          }
          const uint32_t gain = (got.sample & universe).count();
          universe = universe.minus(got.sample);
          ++draws;
          removed += gain;
          stall = gain == 0 ? stall + 1 : 0;
        }
        if (obs) obs(PhaseState{universe, {}, {}, nullptr, draws});
      }
    } catch (const AbortRun&) {
      return coin_flip_abort(ctx, eff_cap);
    }
  };
  return p;
}

// ----- bounded-information DISJ -----------------------------------------------

BoundedInfoProtocol disj_bounded_info(const dist::BipartiteDist& mu, double k, double eps,
                                      RoundsMode mode, PhaseObserver obs) {
  if (!mu) throw ConfigError("disj_bounded_info: null distribution");
  if (k < 0) throw ConfigError("disj_bounded_info: k must be nonnegative");
  check_eps(eps, "disj_bounded_info");
  const uint32_t n = mu->n();
  const uint32_t S =
      static_cast<uint32_t>(std::ceil(std::sqrt((k + 1.0) * static_cast<double>(n))));

  // representation: explicit table, product shortcut, or structured family
  enum class Model { exact, product, structured };
  Model model;
  double info = 0;
  ExactSpecPtr spec;
  if (mu->enumerable() && mu->support_size() <= 2'000'000) {
    model = Model::exact;
    info = info::divergence_suite(mu).I;
    spec = build_exact_spec(mu);
  } else if (mu->is_product()) {
    model = Model::product;
    info = 0;
  } else if (auto* rz = dynamic_cast<const dist::RazborovImpl*>(mu.get())) {
    model = Model::structured;
    info = dist::mu_info_closed_form(rz->n(), rz->m());
  } else {
    throw TooLargeToEnumerate(
        "disj_bounded_info: need an enumerable, product, or structured distribution");
  }

  const double per_iter = (k + 1.0) / eps + 2.0 * std::log2(2.0 / eps) + 12.0;
  const double expected_budget =
      4.0 * (S * (1.0 + std::log2(1.0 / eps)) + (static_cast<double>(n) / S + 1.0) * per_iter);
  const uint64_t own_cap = static_cast<uint64_t>(std::ceil(2.0 * expected_budget / eps));
  auto ma = mu->marginal_a();
  auto mb = mu->marginal_b();
  const uint32_t ww = word_width(n);

  BoundedInfoProtocol out;
  out.info = info;
  out.budget = k;
  out.within_budget = info <= k + 1e-9;

  NamedProtocol p;
  p.name = "disj_bounded_info[n=" + std::to_string(n) + ",k=" + std::to_string(k) + "]";
  p.n = n;
  p.run = [=](const Bits& x, const Bits& y, RunCtx& ctx, uint64_t cap) {
    const uint64_t eff_cap = cap && cap < own_cap ? cap : own_cap;
    ProtoIO io(eff_cap);
    std::optional<ExactState> st;
    if (model == Model::exact) st.emplace(spec);
    Bits universe(n);
    for (uint32_t i = 0; i < n; ++i) universe.set(i);

    auto emit = [&](uint32_t draws) {
      if (!obs) return;
      PhaseState ps{universe, {}, {}, nullptr, draws};
      if (st) st->fill(ps);
      obs(ps);
    };

    try {
      uint32_t draws = 0;
      const uint32_t iter_cap = (n + S - 1) / S + 2;

      // one shrinking step from the named side; false = reject the input pair
      auto shrink_once = [&](bool alice_leads) -> bool {
        const Bits own = alice_leads ? x : y;
        const Bits own_hat = own & universe;
        const Party who = alice_leads ? Party::Alice : Party::Bob;
        double p_disj = 0;
        if (model == Model::exact)
          p_disj = st->row_disjoint_prob(own, own_hat);
        else
          p_disj = marginal_disjoint_prob(alice_leads ? mb : ma, own_hat, eps, ctx.pub);
        const bool reject = p_disj < eps / 2;
        io.send_bit(who, reject);
        if (reject) return false;
        uint32_t removed = 0, stall = 0;
        while (removed < S && stall < 128) {
          Bits sample;
          if (model == Model::exact) {
            sample = st->transmit_disjoint(own, own_hat, !alice_leads, ctx, io, who);
          } else {
            ScanResult got = scan_disjoint(alice_leads ? mb : ma, own & universe, eps, ctx, io, who);
            if (!got.ok) return false;
            sample = std::move(got.sample);
          }
          const uint32_t gain = (sample & universe).count();
          universe = universe.minus(sample);
          ++draws;
          removed += gain;
          stall = gain == 0 ? stall + 1 : 0;
        }
        emit(draws);
        return true;
      };

      if (mode == RoundsMode::unbounded) {
        for (uint32_t iter = 0;; ++iter) {
          if (iter >= iter_cap) throw AbortRun{};
          const bool big_a = (x & universe).count() > S, big_b = (y & universe).count() > S;
          io.send_bit(Party::Alice, big_a);
          io.send_bit(Party::Bob, big_b);
          if (st) st->note_size_bits(universe, S, big_a, big_b);
          if (!big_a && !big_b) {
            emit(draws);
            RunResult res;
            res.output = smallset_run(x & universe, y & universe, S, eps / 2, ctx, io);
            res.transcript = io.take();
            return res;
          }
          if (!shrink_once(big_b)) {  // the side facing a large set drives
            RunResult res;
            res.output = 0;
            res.transcript = io.take();
            return res;
          }
        }
      }

      // solo stream: Alice shrinks blind until the universe is small,
      // recording each station so Bob can name one later
      std::vector<Bits> stations{universe};
      const bool can_stream = model != Model::structured;
      if (can_stream) {
        uint32_t iter = 0;
        while (universe.count() > S) {
          if (++iter > iter_cap) throw AbortRun{};
          if (!shrink_once(true)) {
            RunResult res;
            res.output = 0;
            res.transcript = io.take();
            return res;
          }
          stations.push_back(universe);
        }
      } else {
        io.send_bit(Party::Alice, 0);  // nothing to stream for bounded-size rows
      }

      if (mode == RoundsMode::two_round) {
        // Bob: first station where his set fits, then the set itself
        size_t jstar = 0;
        while ((y & stations[jstar]).count() > S) ++jstar;
        io.send_elias(Party::Bob, jstar);
        const Bits ship = y & stations[jstar];
        const auto idx = ship.to_indices();
        io.send_elias(Party::Bob, idx.size());
        for (uint32_t i : idx) io.send_word(Party::Bob, i, ww);
        RunResult res;
        res.output = (x & stations[jstar]).intersects(ship) ? 0 : 1;
        res.transcript = io.take();
        return res;
      }

      // log_star: interactive small-set finish on the shrunken universe
      const bool big_a = (x & universe).count() > S, big_b = (y & universe).count() > S;
      io.send_bit(Party::Alice, big_a);
      io.send_bit(Party::Bob, big_b);
      if (st) st->note_size_bits(universe, S, big_a, big_b);
      emit(draws);
      if (big_a || big_b) throw AbortRun{};  // stream failed to shrink far enough
      RunResult res;
      res.output = smallset_run(x & universe, y & universe, S, eps / 2, ctx, io);
      res.transcript = io.take();
      return res;
    } catch (const AbortRun&) {
      return coin_flip_abort(ctx, eff_cap);
    }
  };
  out.protocol = std::move(p);
  return out;
}

}  // namespace commlab::disj
