#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "commlab/bits.hpp"

namespace commlab {

// Two-party predicate on subsets of {0,...,n-1}.
class Fn {
 public:
  using Eval = std::function<int(const Bits&, const Bits&)>;

  // 1 iff the sets do not intersect.
  static Fn disj(uint32_t n) {
    return Fn(n, "disj", [](const Bits& x, const Bits& y) { return x.disjoint_from(y) ? 1 : 0; });
  }

  static Fn eq(uint32_t n) {
    return Fn(n, "eq", [](const Bits& x, const Bits& y) { return x == y ? 1 : 0; });
  }

  static Fn custom(uint32_t n, std::string name, Eval f) {
    return Fn(n, std::move(name), std::move(f));
  }

  int operator()(const Bits& x, const Bits& y) const { return eval_(x, y); }
  uint32_t n() const { return n_; }
  const std::string& name() const { return name_; }

 private:
  Fn(uint32_t n, std::string name, Eval f) : n_(n), name_(std::move(name)), eval_(std::move(f)) {}
  uint32_t n_;
  std::string name_;
  Eval eval_;
};

}  // namespace commlab
