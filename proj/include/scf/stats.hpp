#pragma once

#include <cstdint>
#include <vector>

namespace scf {

// Regularized upper incomplete gamma Q(a, x); Q(df/2, x/2) is the chi-square
// survival function.
double gamma_q(double a, double x);

// Goodness-of-fit p-value of observed counts against the uniform distribution
// over counts.size() categories.
double chi_square_uniform_pvalue(const std::vector<uint64_t>& counts);

// Total variation distance between an empirical distribution and uniform.
double tv_distance_from_uniform(const std::vector<uint64_t>& counts);

// Total variation distance between two empirical distributions over the same
// index set.
double tv_distance(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

// Standard deviation of a Binomial(n, p) count.
double binomial_stddev(uint64_t n, double p);

// |observed - n*p| <= z * stddev
bool within_binomial_sd(uint64_t observed, uint64_t n, double p, double z);

// Probability that a uniform sigma-subset of {1..Sigma} avoids `bad` fixed
// positions: C(Sigma-bad, sigma) / C(Sigma, sigma).
double hypergeom_avoid_probability(uint32_t Sigma, uint32_t sigma, uint32_t bad);

struct MeanVar {
  double mean = 0, var = 0;
  uint64_t n = 0;
};
MeanVar mean_var(const std::vector<double>& xs);

}  // namespace scf
