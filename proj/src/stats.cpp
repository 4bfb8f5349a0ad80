#include "scf/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "scf/subset.hpp"

namespace scf {

// Series expansion of P(a,x), valid for x < a+1.
static double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), valid for x >= a+1.
static double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_uniform_pvalue(const std::vector<uint64_t>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi_square: need >= 2 categories");
  uint64_t n = 0;
  for (uint64_t c : counts) n += c;
  if (n == 0) throw std::invalid_argument("chi_square: empty sample");
  double expected = static_cast<double>(n) / counts.size();
  double stat = 0;
  for (uint64_t c : counts) {
    double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  double df = static_cast<double>(counts.size() - 1);
  return gamma_q(df / 2.0, stat / 2.0);
}

double tv_distance_from_uniform(const std::vector<uint64_t>& counts) {
  uint64_t n = 0;
  for (uint64_t c : counts) n += c;
  if (n == 0) throw std::invalid_argument("tv_distance: empty sample");
  double u = 1.0 / counts.size(), acc = 0;
  for (uint64_t c : counts) acc += std::fabs(static_cast<double>(c) / n - u);
  return acc / 2.0;
}

double tv_distance(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tv_distance: size mismatch");
  uint64_t na = 0, nb = 0;
  for (uint64_t c : a) na += c;
  for (uint64_t c : b) nb += c;
  if (na == 0 || nb == 0) throw std::invalid_argument("tv_distance: empty sample");
  double acc = 0;
  for (size_t i = 0; i < a.size(); ++i)
    acc += std::fabs(static_cast<double>(a[i]) / na - static_cast<double>(b[i]) / nb);
  return acc / 2.0;
}

double binomial_stddev(uint64_t n, double p) { return std::sqrt(static_cast<double>(n) * p * (1.0 - p)); }

bool within_binomial_sd(uint64_t observed, uint64_t n, double p, double z) {
  double mean = static_cast<double>(n) * p;
  return std::fabs(static_cast<double>(observed) - mean) <= z * binomial_stddev(n, p);
}

double hypergeom_avoid_probability(uint32_t Sigma, uint32_t sigma, uint32_t bad) {
  if (bad + sigma > Sigma) return 0.0;
  // product form avoids large binomials: prod_{i=0..sigma-1} (Sigma-bad-i)/(Sigma-i)
  double p = 1.0;
  for (uint32_t i = 0; i < sigma; ++i)
    p *= static_cast<double>(Sigma - bad - i) / static_cast<double>(Sigma - i);
  return p;
}

MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  mv.n = xs.size();
  if (xs.empty()) return mv;
  double sum = 0;
  for (double x : xs) sum += x;
  mv.mean = sum / xs.size();
  double acc = 0;
  for (double x : xs) acc += (x - mv.mean) * (x - mv.mean);
  mv.var = xs.size() > 1 ? acc / (xs.size() - 1) : 0.0;
  return mv;
}

}  // namespace scf
