#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "commlab/bits.hpp"
#include "commlab/errors.hpp"
#include "commlab/rng.hpp"

namespace commlab::dist {

// ----- marginals ------------------------------------------------------------

class MarginalDist {
 public:
  virtual ~MarginalDist() = default;
  virtual uint32_t n() const = 0;
  virtual double mass(const Bits& x) const = 0;
  virtual Bits sample(Rng& rng) const = 0;
  virtual bool enumerable() const = 0;
  virtual uint64_t support_size() const = 0;
  virtual void for_each_support(const std::function<void(const Bits&, double)>& f) const = 0;
  // P[X ∩ s = ∅] under this marginal.
  virtual double prob_disjoint(const Bits& s) const;
  virtual std::string describe() const = 0;
};

using Marginal = std::shared_ptr<const MarginalDist>;

// Explicit finite support; sampling by inverse CDF.
class EnumerableMarginal : public MarginalDist {
 public:
  EnumerableMarginal(uint32_t n, std::vector<std::pair<Bits, double>> support);
  uint32_t n() const override { return n_; }
  double mass(const Bits& x) const override;
  Bits sample(Rng& rng) const override;
  bool enumerable() const override { return true; }
  uint64_t support_size() const override { return support_.size(); }
  void for_each_support(const std::function<void(const Bits&, double)>& f) const override;
  double prob_disjoint(const Bits& s) const override;
  std::string describe() const override;

 private:
  uint32_t n_;
  std::vector<std::pair<Bits, double>> support_;
  std::vector<double> cum_;
  std::unordered_map<Bits, double, BitsHash> lookup_;
};

// Coordinates independently 1 with probability p; sparse sampling via
// geometric skips, so a draw costs O(#ones) even for tiny p.
class BernoulliMarginal : public MarginalDist {
 public:
  BernoulliMarginal(uint32_t n, double p);
  uint32_t n() const override { return n_; }
  double mass(const Bits& x) const override;
  Bits sample(Rng& rng) const override;
  bool enumerable() const override;
  uint64_t support_size() const override;
  void for_each_support(const std::function<void(const Bits&, double)>& f) const override;
  double prob_disjoint(const Bits& s) const override;
  double p() const { return p_; }
  std::string describe() const override;

 private:
  uint32_t n_;
  double p_;
};

// Uniform over all m-element subsets of {0,...,n-1}.
class UniformSubsetsMarginal : public MarginalDist {
 public:
  UniformSubsetsMarginal(uint32_t n, uint32_t m);
  uint32_t n() const override { return n_; }
  double mass(const Bits& x) const override;
  Bits sample(Rng& rng) const override;
  bool enumerable() const override;
  uint64_t support_size() const override;
  void for_each_support(const std::function<void(const Bits&, double)>& f) const override;
  double prob_disjoint(const Bits& s) const override;
  uint32_t m() const { return m_; }
  std::string describe() const override;

 private:
  uint32_t n_;
  uint32_t m_;
};

// ----- joint distributions --------------------------------------------------

using SupportVisitor = std::function<void(const Bits& x, const Bits& y, double mass)>;

class DistImpl {
 public:
  virtual ~DistImpl() = default;
  virtual uint32_t n() const = 0;
  virtual double mass(const Bits& x, const Bits& y) const = 0;
  virtual std::pair<Bits, Bits> sample(Rng& rng) const = 0;
  // True when the support can be streamed pair-by-pair in reasonable time;
  // divergence and conditioning code rely on streaming, never on
  // materialized tables.
  virtual bool enumerable() const = 0;
  virtual uint64_t support_size() const = 0;
  virtual void for_each_support(const SupportVisitor& f) const = 0;
  virtual bool is_product() const { return false; }
  virtual Marginal marginal_a() const = 0;
  virtual Marginal marginal_b() const = 0;
  // P[x ∩ Y = ∅ | X = x]; NaN when no closed form is available.
  virtual double cond_disjoint_prob_given_x(const Bits& x) const;
  virtual std::string describe() const = 0;
};

using BipartiteDist = std::shared_ptr<const DistImpl>;

// Canonical enumerable distribution: explicit (x, y, mass) table.
class SparseSupportImpl : public DistImpl {
 public:
  SparseSupportImpl(uint32_t n, std::vector<std::tuple<Bits, Bits, double>> support,
                    bool normalize = false);
  uint32_t n() const override { return n_; }
  double mass(const Bits& x, const Bits& y) const override;
  std::pair<Bits, Bits> sample(Rng& rng) const override;
  bool enumerable() const override { return true; }
  uint64_t support_size() const override { return support_.size(); }
  void for_each_support(const SupportVisitor& f) const override;
  Marginal marginal_a() const override;
  Marginal marginal_b() const override;
  std::string describe() const override;
  const std::vector<std::tuple<Bits, Bits, double>>& table() const { return support_; }

 private:
  struct PairHash {
    size_t operator()(const std::pair<Bits, Bits>& p) const {
      return static_cast<size_t>(mix64(p.first.hash() ^ (p.second.hash() * 0x9e3779b97f4a7c15ULL)));
    }
  };
  uint32_t n_;
  std::vector<std::tuple<Bits, Bits, double>> support_;
  std::vector<double> cum_;
  std::unordered_map<std::pair<Bits, Bits>, double, PairHash> lookup_;
  mutable std::once_flag marg_once_;
  mutable Marginal marg_a_, marg_b_;
};

// Independent marginals.
class ProductImpl : public DistImpl {
 public:
  ProductImpl(Marginal a, Marginal b);
  uint32_t n() const override { return a_->n(); }
  double mass(const Bits& x, const Bits& y) const override { return a_->mass(x) * b_->mass(y); }
  std::pair<Bits, Bits> sample(Rng& rng) const override;
  bool enumerable() const override;
  uint64_t support_size() const override;
  void for_each_support(const SupportVisitor& f) const override;
  bool is_product() const override { return true; }
  Marginal marginal_a() const override { return a_; }
  Marginal marginal_b() const override { return b_; }
  double cond_disjoint_prob_given_x(const Bits& x) const override { return b_->prob_disjoint(x); }
  std::string describe() const override;

 private:
  Marginal a_, b_;
};

// Convex combination of components.  Supports may overlap; streaming emits
// each pair once with its total mixture mass (later components skip pairs
// already covered by an earlier one).
class MixtureImpl : public DistImpl {
 public:
  MixtureImpl(std::vector<std::pair<double, BipartiteDist>> components);
  uint32_t n() const override;
  double mass(const Bits& x, const Bits& y) const override;
  std::pair<Bits, Bits> sample(Rng& rng) const override;
  bool enumerable() const override;
  uint64_t support_size() const override;
  void for_each_support(const SupportVisitor& f) const override;
  Marginal marginal_a() const override;
  Marginal marginal_b() const override;
  std::string describe() const override;
  const std::vector<std::pair<double, BipartiteDist>>& components() const { return comps_; }

 private:
  std::vector<std::pair<double, BipartiteDist>> comps_;
  mutable std::once_flag size_once_;
  mutable uint64_t cached_support_size_ = 0;
  mutable std::once_flag marg_once_;
  mutable Marginal marg_a_, marg_b_;
};

// Inputs embedded into a larger universe; coordinates >= inner n are zero.
class ZeroPadImpl : public DistImpl {
 public:
  ZeroPadImpl(BipartiteDist inner, uint32_t outer_n);
  uint32_t n() const override { return outer_n_; }
  double mass(const Bits& x, const Bits& y) const override;
  std::pair<Bits, Bits> sample(Rng& rng) const override;
  bool enumerable() const override { return inner_->enumerable(); }
  uint64_t support_size() const override { return inner_->support_size(); }
  void for_each_support(const SupportVisitor& f) const override;
  bool is_product() const override { return inner_->is_product(); }
  Marginal marginal_a() const override;
  Marginal marginal_b() const override;
  double cond_disjoint_prob_given_x(const Bits& x) const override;
  std::string describe() const override;
  const BipartiteDist& inner() const { return inner_; }

 private:
  BipartiteDist inner_;
  uint32_t outer_n_;
};

// ----- constructors / transforms --------------------------------------------

BipartiteDist make_product(Marginal a, Marginal b);
BipartiteDist make_explicit(uint32_t n, std::vector<std::tuple<Bits, Bits, double>> support,
                            bool normalize = false);

// Conditioning: renormalize onto {(x,y) : keep(x,y)}.  Requires an
// enumerable distribution; throws EmptyConditioning when nothing survives,
// TooLargeToEnumerate past the cap.
BipartiteDist restrict_condition(const BipartiteDist& d,
                                 const std::function<bool(const Bits&, const Bits&)>& keep,
                                 uint64_t cap = 20'000'000);

BipartiteDist zero_pad_transform(const BipartiteDist& d, uint32_t outer_n);

// Uniform m-subset via Floyd's sampler; m rng draws.
Bits sample_m_subset(Rng& rng, uint32_t n, uint32_t m);

// Lexicographic enumeration of all m-subsets of {0,...,n-1}.
void for_each_m_subset(uint32_t n, uint32_t m, const std::function<void(const Bits&)>& f);

}  // namespace commlab::dist
