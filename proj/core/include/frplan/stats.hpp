#pragma once

#include <functional>
#include <span>

namespace frplan {

double poisson_pmf(int k, double mean);

// Smallest k_max such that P{X > k_max} < tail_tol for X ~ Poisson(mean),
// clamped to cap.
int poisson_kmax(double mean, double tail_tol, int cap = 4096);

// Binomial pmf with exact handling of p = 0 and p = 1.
double binomial_pmf(int k, int n, double p);

// Jain fairness index (sum x)^2 / (n sum x^2); 1.0 for an all-zero sample.
double jain_index(std::span<const double> x);

// Kolmogorov-Smirnov sup distance between the empirical CDF of an ascending
// sample and a reference CDF.
double ks_distance(std::span<const double> sorted_sample,
                   const std::function<double(double)>& cdf);

}  // namespace frplan
