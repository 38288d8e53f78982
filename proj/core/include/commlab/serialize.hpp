#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "commlab/dist.hpp"
#include "commlab/sparse_fn.hpp"

// Binary container for distributions and sparse matrices.  Layout (all
// integers little-endian, doubles as IEEE-754 bit patterns in a u64):
//
//   magic   4 bytes  "CLDB"
//   version u32      1
//   node
//
// node := tag u8, payload:
//   1 product        marginal a, marginal b
//   2 explicit       n u32, count u64, count x (bits, bits, mass f64)
//   3 mixture        count u32, count x (weight f64, node)
//   4 structured     n u32, m u32, variant u8 (0 nu, 1 sigma, 2 mu, 3 triple)
//   5 zero_pad       outer_n u32, node inner
//   6 sparse_hard    n u32, d u32, seed u64
//   7 matrix         n u32, d u32, seed u64   (a sparse matrix, not a dist)
//
// marginal := tag u8, payload:
//   1 bernoulli       n u32, p f64
//   2 uniform_subsets n u32, m u32
//   3 enumerable      n u32, count u64, count x (bits, mass f64)
//
// bits := count u32, count x index u32 (the set coordinates; width from
// the enclosing node's n).
//
// Seeded objects (structured families, sparse matrices) store only their
// construction parameters; regeneration is bit-identical.  Anything else
// enumerable is stored as an explicit table, so loading loses the original
// type but not the law.  The debug text form is a human-readable tree for
// logs; it has no parser.
namespace commlab::serialize {

void write_dist(std::ostream& os, const dist::BipartiteDist& d);
dist::BipartiteDist read_dist(std::istream& is);

void write_matrix(std::ostream& os, const sparse::SparseFn& f);
std::shared_ptr<const sparse::SparseFn> read_matrix(std::istream& is);

void save_dist(const std::string& path, const dist::BipartiteDist& d);
dist::BipartiteDist load_dist(const std::string& path);
void save_matrix(const std::string& path, const sparse::SparseFn& f);
std::shared_ptr<const sparse::SparseFn> load_matrix(const std::string& path);

std::string debug_text(const dist::BipartiteDist& d);
std::string debug_text(const sparse::SparseFn& f);

}  // namespace commlab::serialize
