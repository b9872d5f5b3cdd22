#include "frplan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frplan {

double poisson_pmf(int k, double mean) {
  if (k < 0) return 0.0;
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

int poisson_kmax(double mean, double tail_tol, int cap) {
  if (mean <= 0.0) return 0;
  double cdf = 0.0;
  for (int k = 0; k <= cap; ++k) {
    cdf += poisson_pmf(k, mean);
    if (1.0 - cdf < tail_tol) return k;
  }
  return cap;
}

double binomial_pmf(int k, int n, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  double log_coeff = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                     std::lgamma(n - k + 1.0);
  return std::exp(log_coeff + k * std::log(p) + (n - k) * std::log1p(-p));
}

double jain_index(std::span<const double> x) {
  double s1 = 0.0, s2 = 0.0;
  for (double v : x) {
    s1 += v;
    s2 += v * v;
  }
  if (s2 == 0.0) return 1.0;
  return s1 * s1 / (static_cast<double>(x.size()) * s2);
}

double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf) {
  if (sorted_sample.empty()) {
    throw std::invalid_argument("ks_distance: empty sample");
  }
  double n = static_cast<double>(sorted_sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    double f = cdf(sorted_sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace frplan
