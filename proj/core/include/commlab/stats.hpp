#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "commlab/errors.hpp"

namespace commlab::stats {

// Exact binomial coefficient; throws on overflow past uint64.
uint64_t choose_u64(uint32_t n, uint32_t k);

// log2 C(n,k) via lgamma; -inf when k > n.
double log2_choose(uint32_t n, uint32_t k);

// -p log2 p - (1-p) log2 (1-p); 0 at the endpoints.
double binary_entropy(double p);

// 95% (z=1.96) score interval for a binomial proportion.
std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials, double z = 1.96);

// Least-squares slope of log2(y) against log2(x).
double fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys);

// Regularized incomplete gamma functions (series / continued fraction).
double gamma_p(double a, double x);  // P(a,x), lower
double gamma_q(double a, double x);  // Q(a,x), upper

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_pvalue(double stat, double dof);

}  // namespace commlab::stats
