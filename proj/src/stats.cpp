#include "qsd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsd {

void Histogram::add(double x) {
    if (x < lo || x >= hi) {
        // samples exactly at the upper edge belong to the last bin
        if (x == hi) {
            ++counts.back();
            ++total;
        } else {
            ++outside;
        }
        return;
    }
    int i = static_cast<int>((x - lo) / (hi - lo) * bins());
    i = std::min(i, bins() - 1);
    ++counts[i];
    ++total;
}

namespace {

// series expansion of P(a,x), good for x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), good for x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0) return 0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(double x, double df) {
    if (x <= 0) return 0;
    return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_quantile(double prob, double df) {
    if (prob <= 0 || prob >= 1) throw std::invalid_argument("chi2_quantile: prob in (0,1)");
    double lo = 0, hi = df + 10.0;
    while (chi2_cdf(hi, df) < prob) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chi2_cdf(mid, df) < prob ? lo : hi) = mid;
        if (hi - lo < 1e-10 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

Chi2Result chi2_gof(const std::vector<long long>& counts, const std::vector<double>& probs) {
    if (counts.size() != probs.size() || counts.size() < 2)
        throw std::invalid_argument("chi2_gof: need matching counts/probs, >= 2 bins");

    Chi2Result out;
    double psum = 0;
    for (double p : probs) {
        if (p <= 0) throw std::invalid_argument("chi2_gof: probabilities must be positive");
        psum += p;
    }
    for (long long c : counts) out.n += c;

    for (size_t i = 0; i < counts.size(); ++i) {
        const double expected = static_cast<double>(out.n) * probs[i] / psum;
        const double d = static_cast<double>(counts[i]) - expected;
        out.statistic += d * d / expected;
    }
    out.df = static_cast<int>(counts.size()) - 1;
    out.p_value = 1.0 - chi2_cdf(out.statistic, out.df);
    return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
    const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

}  // namespace qsd
