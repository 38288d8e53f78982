#include "commlab/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "commlab/razborov.hpp"

namespace commlab::serialize {

namespace {

constexpr char kMagic[4] = {'C', 'L', 'D', 'B'};
constexpr uint32_t kVersion = 1;
constexpr uint64_t kCountCap = 50'000'000;

// node tags
constexpr uint8_t kProduct = 1, kExplicit = 2, kMixture = 3, kStructured = 4, kZeroPad = 5,
                  kSparseHard = 6, kMatrix = 7;
// marginal tags
constexpr uint8_t kBernoulli = 1, kUniformSubsets = 2, kEnumerable = 3;

void put_u8(std::ostream& os, uint8_t v) { os.put(static_cast<char>(v)); }
void put_u32(std::ostream& os, uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::ostream& os, uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<uint64_t>(v)); }

uint8_t get_u8(std::istream& is) {
  const int c = is.get();
  if (c == EOF) throw ConfigError("container truncated");
  return static_cast<uint8_t>(c);
}
uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t{get_u8(is)} << (8 * i);
  return v;
}
uint64_t get_u64(std::istream& is) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t{get_u8(is)} << (8 * i);
  return v;
}
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void put_bits(std::ostream& os, const Bits& b) {
  const auto idx = b.to_indices();
  put_u32(os, static_cast<uint32_t>(idx.size()));
  for (uint32_t i : idx) put_u32(os, i);
}

Bits get_bits(std::istream& is, uint32_t n) {
  const uint32_t count = get_u32(is);
  if (count > n) throw ConfigError("container: set larger than its universe");
  std::vector<uint32_t> idx(count);
  for (auto& i : idx) {
    i = get_u32(is);
    if (i >= n) throw ConfigError("container: coordinate out of range");
  }
  return Bits::from_indices(n, idx);
}

void put_marginal(std::ostream& os, const dist::Marginal& m) {
  if (auto* b = dynamic_cast<const dist::BernoulliMarginal*>(m.get())) {
    put_u8(os, kBernoulli);
    put_u32(os, b->n());
    put_f64(os, b->p());
    return;
  }
  if (auto* u = dynamic_cast<const dist::UniformSubsetsMarginal*>(m.get())) {
    put_u8(os, kUniformSubsets);
    put_u32(os, u->n());
    put_u32(os, u->m());
    return;
  }
  if (!m->enumerable() || m->support_size() > kCountCap)
    throw ConfigError("marginal has no serializable form: " + m->describe());
  put_u8(os, kEnumerable);
  put_u32(os, m->n());
  put_u64(os, m->support_size());
  m->for_each_support([&](const Bits& x, double mass) {
    put_bits(os, x);
    put_f64(os, mass);
  });
}

dist::Marginal get_marginal(std::istream& is) {
  switch (get_u8(is)) {
    case kBernoulli: {
      const uint32_t n = get_u32(is);
      const double p = get_f64(is);
      return std::make_shared<dist::BernoulliMarginal>(n, p);
    }
    case kUniformSubsets: {
      const uint32_t n = get_u32(is);
      const uint32_t m = get_u32(is);
      return std::make_shared<dist::UniformSubsetsMarginal>(n, m);
    }
    case kEnumerable: {
      const uint32_t n = get_u32(is);
      const uint64_t count = get_u64(is);
      if (count > kCountCap) throw ConfigError("container: marginal table too large");
      std::vector<std::pair<Bits, double>> sup;
      sup.reserve(count);
      for (uint64_t i = 0; i < count; ++i) {
        Bits x = get_bits(is, n);
        sup.emplace_back(std::move(x), get_f64(is));
      }
      return std::make_shared<dist::EnumerableMarginal>(n, std::move(sup));
    }
    default:
      throw ConfigError("container: unknown marginal tag");
  }
}

void put_node(std::ostream& os, const dist::BipartiteDist& d) {
  if (auto* r = dynamic_cast<const dist::RazborovImpl*>(d.get())) {
    put_u8(os, kStructured);
    put_u32(os, r->n());
    put_u32(os, r->m());
    put_u8(os, static_cast<uint8_t>(r->variant()));
    return;
  }
  if (auto* s = dynamic_cast<const sparse::SparseHardImpl*>(d.get())) {
    put_u8(os, kSparseHard);
    put_u32(os, s->fn()->n());
    put_u32(os, s->fn()->d());
    put_u64(os, s->fn()->seed());
    return;
  }
  if (auto* p = dynamic_cast<const dist::ProductImpl*>(d.get())) {
    put_u8(os, kProduct);
    put_marginal(os, p->marginal_a());
    put_marginal(os, p->marginal_b());
    return;
  }
  if (auto* m = dynamic_cast<const dist::MixtureImpl*>(d.get())) {
    put_u8(os, kMixture);
    put_u32(os, static_cast<uint32_t>(m->components().size()));
    for (const auto& [w, c] : m->components()) {
      put_f64(os, w);
      put_node(os, c);
    }
    return;
  }
  if (auto* z = dynamic_cast<const dist::ZeroPadImpl*>(d.get())) {
    put_u8(os, kZeroPad);
    put_u32(os, z->n());
    put_node(os, z->inner());
    return;
  }
  if (auto* e = dynamic_cast<const dist::SparseSupportImpl*>(d.get())) {
    put_u8(os, kExplicit);
    put_u32(os, e->n());
    put_u64(os, e->table().size());
    for (const auto& [x, y, mass] : e->table()) {
      put_bits(os, x);
      put_bits(os, y);
      put_f64(os, mass);
    }
    return;
  }
  // last resort: freeze the law as an explicit table
  if (d->enumerable() && d->support_size() <= kCountCap) {
    put_u8(os, kExplicit);
    put_u32(os, d->n());
    put_u64(os, d->support_size());
    d->for_each_support([&](const Bits& x, const Bits& y, double mass) {
      put_bits(os, x);
      put_bits(os, y);
      put_f64(os, mass);
    });
    return;
  }
  throw ConfigError("distribution has no serializable form: " + d->describe());
}

dist::BipartiteDist get_node(std::istream& is) {
  switch (get_u8(is)) {
    case kStructured: {
      const uint32_t n = get_u32(is);
      const uint32_t m = get_u32(is);
      const uint8_t v = get_u8(is);
      switch (v) {
        case 0: return dist::make_nu(n, m);
        case 1: return dist::make_sigma(n, m);
        case 2: return dist::make_mu(n, m);
        case 3: return dist::make_triple_mu(n, m);
        default: throw ConfigError("container: unknown structured variant");
      }
    }
    case kSparseHard: {
      const uint32_t n = get_u32(is);
      const uint32_t d = get_u32(is);
      const uint64_t seed = get_u64(is);
      return sparse::make_sparse_hard(std::make_shared<sparse::SparseFn>(n, d, seed));
    }
    case kProduct: {
      auto a = get_marginal(is);
      auto b = get_marginal(is);
      return dist::make_product(std::move(a), std::move(b));
    }
    case kMixture: {
      const uint32_t count = get_u32(is);
      if (count == 0 || count > 1024) throw ConfigError("container: bad mixture size");
      std::vector<std::pair<double, dist::BipartiteDist>> comps;
      comps.reserve(count);
      for (uint32_t i = 0; i < count; ++i) {
        const double w = get_f64(is);
        comps.emplace_back(w, get_node(is));
      }
      return std::make_shared<dist::MixtureImpl>(std::move(comps));
    }
    case kZeroPad: {
      const uint32_t outer = get_u32(is);
      return dist::zero_pad_transform(get_node(is), outer);
    }
    case kExplicit: {
      const uint32_t n = get_u32(is);
      const uint64_t count = get_u64(is);
      if (count > kCountCap) throw ConfigError("container: table too large");
      std::vector<std::tuple<Bits, Bits, double>> sup;
      sup.reserve(count);
      for (uint64_t i = 0; i < count; ++i) {
        Bits x = get_bits(is, n);
        Bits y = get_bits(is, n);
        sup.emplace_back(std::move(x), std::move(y), get_f64(is));
      }
      return dist::make_explicit(n, std::move(sup));
    }
    case kMatrix:
      throw ConfigError("container holds a sparse matrix, not a distribution");
    default:
      throw ConfigError("container: unknown node tag");
  }
}

void put_header(std::ostream& os) {
  os.write(kMagic, 4);
  put_u32(os, kVersion);
}

void get_header(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (is.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    throw ConfigError("not a commlab container (bad magic)");
  const uint32_t version = get_u32(is);
  if (version != kVersion)
    throw ConfigError("unsupported container version " + std::to_string(version));
}

void debug_node(std::ostringstream& out, const dist::BipartiteDist& d, int depth);

void debug_marginal(std::ostringstream& out, const dist::Marginal& m, int depth) {
  out << std::string(2 * depth, ' ') << m->describe() << "\n";
}

void debug_node(std::ostringstream& out, const dist::BipartiteDist& d, int depth) {
  const std::string pad(2 * depth, ' ');
  if (auto* m = dynamic_cast<const dist::MixtureImpl*>(d.get())) {
    out << pad << "mixture\n";
    for (const auto& [w, c] : m->components()) {
      out << pad << "  weight " << w << "\n";
      debug_node(out, c, depth + 2);
    }
  } else if (auto* p = dynamic_cast<const dist::ProductImpl*>(d.get())) {
    out << pad << "product\n";
    debug_marginal(out, p->marginal_a(), depth + 1);
    debug_marginal(out, p->marginal_b(), depth + 1);
  } else if (auto* z = dynamic_cast<const dist::ZeroPadImpl*>(d.get())) {
    out << pad << "zero_pad to n=" << z->n() << "\n";
    debug_node(out, z->inner(), depth + 1);
  } else {
    out << pad << d->describe() << "\n";
  }
}

}  // namespace

void write_dist(std::ostream& os, const dist::BipartiteDist& d) {
  if (!d) throw ConfigError("write_dist: null distribution");
  put_header(os);
  put_node(os, d);
  if (!os) throw Error("write_dist: stream failure");
}

dist::BipartiteDist read_dist(std::istream& is) {
  get_header(is);
  return get_node(is);
}

void write_matrix(std::ostream& os, const sparse::SparseFn& f) {
  put_header(os);
  put_u8(os, kMatrix);
  put_u32(os, f.n());
  put_u32(os, f.d());
  put_u64(os, f.seed());
  if (!os) throw Error("write_matrix: stream failure");
}

std::shared_ptr<const sparse::SparseFn> read_matrix(std::istream& is) {
  get_header(is);
  if (get_u8(is) != kMatrix) throw ConfigError("container holds a distribution, not a matrix");
  const uint32_t n = get_u32(is);
  const uint32_t d = get_u32(is);
  const uint64_t seed = get_u64(is);
  return std::make_shared<sparse::SparseFn>(n, d, seed);
}

void save_dist(const std::string& path, const dist::BipartiteDist& d) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path);
  write_dist(os, d);
}

dist::BipartiteDist load_dist(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open: " + path);
  return read_dist(is);
}

void save_matrix(const std::string& path, const sparse::SparseFn& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path);
  write_matrix(os, f);
}

std::shared_ptr<const sparse::SparseFn> load_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open: " + path);
  return read_matrix(is);
}

std::string debug_text(const dist::BipartiteDist& d) {
  std::ostringstream out;
  out << "commlab container v" << kVersion << "\n";
  debug_node(out, d, 0);
  return out.str();
}

std::string debug_text(const sparse::SparseFn& f) {
  std::ostringstream out;
  out << "commlab container v" << kVersion << "\n"
      << "matrix n=" << f.n() << " d=" << f.d() << " seed=" << f.seed() << " ones=" << f.ones()
      << "\n";
  return out.str();
}

}  // namespace commlab::serialize
