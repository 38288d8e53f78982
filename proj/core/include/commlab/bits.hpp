#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace commlab {

// Fixed-width bit vector; a subset of {0,...,n-1}.  Word 0 holds bits 0..63.
// Bits past n are kept zero so word-wise ops stay valid.
class Bits {
 public:
  Bits() : n_(0) {}
  explicit Bits(uint32_t n) : n_(n), words_((n + 63) / 64, 0) {}
  Bits(uint32_t n, std::initializer_list<uint32_t> idx) : Bits(n) {
    for (uint32_t i : idx) set(i);
  }
  static Bits from_indices(uint32_t n, const std::vector<uint32_t>& idx) {
    Bits b(n);
    for (uint32_t i : idx) b.set(i);
    return b;
  }

  uint32_t size() const { return n_; }
  uint32_t num_words() const { return static_cast<uint32_t>(words_.size()); }
  uint64_t word(uint32_t w) const { return words_[w]; }
  uint64_t& word(uint32_t w) { return words_[w]; }

  bool get(uint32_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(uint32_t i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
  void clear(uint32_t i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  void assign(uint32_t i, bool v) { v ? set(i) : clear(i); }

  uint32_t count() const {
    uint32_t c = 0;
    for (uint64_t w : words_) c += static_cast<uint32_t>(std::popcount(w));
    return c;
  }

  bool intersects(const Bits& o) const {
    for (size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  bool disjoint_from(const Bits& o) const { return !intersects(o); }

  bool is_subset_of(const Bits& o) const {
    for (size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  bool any() const {
    for (uint64_t w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  Bits operator&(const Bits& o) const {
    Bits r(n_);
    for (size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
    return r;
  }
  Bits operator|(const Bits& o) const {
    Bits r(n_);
    for (size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] | o.words_[w];
    return r;
  }
  // Set difference: bits of *this not in o.
  Bits minus(const Bits& o) const {
    Bits r(n_);
    for (size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & ~o.words_[w];
    return r;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && words_ == o.words_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }
  // Lexicographic on (n, words); total order for use as map key.
  bool operator<(const Bits& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return words_ < o.words_;
  }

  // Index of lowest set bit >= from, or size() if none.
  uint32_t next_set(uint32_t from) const {
    if (from >= n_) return n_;
    uint32_t w = from >> 6;
    uint64_t cur = words_[w] & (~uint64_t(0) << (from & 63));
    while (true) {
      if (cur) return (w << 6) + static_cast<uint32_t>(std::countr_zero(cur));
      if (++w >= words_.size()) return n_;
      cur = words_[w];
    }
  }

  template <typename F>
  void for_each_set(F&& f) const {
    for (uint32_t w = 0; w < words_.size(); ++w) {
      uint64_t cur = words_[w];
      while (cur) {
        f((w << 6) + static_cast<uint32_t>(std::countr_zero(cur)));
        cur &= cur - 1;
      }
    }
  }

  std::vector<uint32_t> to_indices() const {
    std::vector<uint32_t> out;
    out.reserve(count());
    for_each_set([&](uint32_t i) { out.push_back(i); });
    return out;
  }

  // Low 64 bits as integer; requires n <= 64.
  uint64_t low64() const { return words_.empty() ? 0 : words_[0]; }
  static Bits from_low64(uint32_t n, uint64_t mask) {
    Bits b(n);
    if (!b.words_.empty()) b.words_[0] = n >= 64 ? mask : (mask & ((uint64_t(1) << n) - 1));
    return b;
  }

  // "{0,3,7}" — stable across runs, used in debug dumps.
  std::string to_string() const;

  uint64_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ n_;
    for (uint64_t w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  uint32_t n_;
  std::vector<uint64_t> words_;
};

struct BitsHash {
  size_t operator()(const Bits& b) const { return static_cast<size_t>(b.hash()); }
};

}  // namespace commlab
