#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace scs {

double mean(const std::vector<double>& xs);
// Unbiased (n-1) sample variance.
double sample_variance(const std::vector<double>& xs);
double median(std::vector<double> xs);

std::complex<double> complex_mean(const std::vector<std::complex<double>>& xs);
// Unbiased sample variance of complex samples: sum |x - mean|^2 / (n-1).
double complex_sample_variance(const std::vector<std::complex<double>>& xs);
// Normalized complex correlation between paired samples, |rho| <= 1 up to
// sampling noise.
std::complex<double> complex_correlation(const std::vector<std::complex<double>>& a,
                                         const std::vector<std::complex<double>>& b);

double normal_cdf(double x, double mu = 0.0, double sigma = 1.0);

// Two-sided Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Asymptotic critical value sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical(size_t n, double alpha);

}  // namespace scs
