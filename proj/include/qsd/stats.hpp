#pragma once

#include <functional>
#include <vector>

namespace qsd {

// Equal-width histogram on [lo, hi); samples outside are counted separately.
struct Histogram {
    double lo = 0, hi = 1;
    std::vector<long long> counts;
    long long total = 0;    // in-range samples
    long long outside = 0;

    Histogram(double lo, double hi, int bins) : lo(lo), hi(hi), counts(bins, 0) {}
    int bins() const { return static_cast<int>(counts.size()); }
    double bin_lo(int i) const { return lo + (hi - lo) * i / bins(); }
    double bin_hi(int i) const { return lo + (hi - lo) * (i + 1) / bins(); }
    double bin_center(int i) const { return 0.5 * (bin_lo(i) + bin_hi(i)); }
    void add(double x);
};

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

double chi2_cdf(double x, double df);
double chi2_quantile(double prob, double df);  // inverse CDF by bisection

// Pearson chi-square against expected bin probabilities (renormalized over
// the supplied window). df = bins - 1.
struct Chi2Result {
    double statistic = 0;
    int df = 0;
    double p_value = 0;
    long long n = 0;
};
Chi2Result chi2_gof(const std::vector<long long>& counts, const std::vector<double>& probs);

// Two-sample Kolmogorov-Smirnov distance and the large-sample critical value
// c(alpha) sqrt((n+m)/(n m)), c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical(double alpha, std::size_t n, std::size_t m);

}  // namespace qsd
