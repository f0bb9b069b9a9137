#include "scs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scs {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 samples");
    const double mu = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return acc / static_cast<double>(xs.size() - 1);
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(xs.begin(), xs.end());
    const size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::complex<double> complex_mean(const std::vector<std::complex<double>>& xs) {
    if (xs.empty()) throw std::invalid_argument("complex_mean: empty sample");
    std::complex<double> acc(0.0, 0.0);
    for (const auto& x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double complex_sample_variance(const std::vector<std::complex<double>>& xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("complex_sample_variance: need at least 2 samples");
    }
    const std::complex<double> mu = complex_mean(xs);
    double acc = 0.0;
    for (const auto& x : xs) acc += std::norm(x - mu);
    return acc / static_cast<double>(xs.size() - 1);
}

std::complex<double> complex_correlation(const std::vector<std::complex<double>>& a,
                                         const std::vector<std::complex<double>>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("complex_correlation: length mismatch");
    }
    if (a.size() < 2) throw std::invalid_argument("complex_correlation: need at least 2 samples");
    const std::complex<double> mu_a = complex_mean(a);
    const std::complex<double> mu_b = complex_mean(b);
    std::complex<double> cov(0.0, 0.0);
    double va = 0.0;
    double vb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const std::complex<double> da = a[i] - mu_a;
        const std::complex<double> db = b[i] - mu_b;
        cov += da * std::conj(db);
        va += std::norm(da);
        vb += std::norm(db);
    }
    const double denom = std::sqrt(va * vb);
    if (denom <= 0.0) return {0.0, 0.0};
    return cov / denom;
}

double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = f - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - f;
        d = std::max(d, std::max(lo, hi));
    }
    return d;
}

double ks_critical(size_t n, double alpha) {
    if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("ks_critical: need n >= 1 and alpha in (0,1)");
    }
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

}  // namespace scs
