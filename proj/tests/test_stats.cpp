#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qsd/stats.hpp"

using namespace qsd;

TEST_CASE("chi-square quantiles against reference values") {
    CHECK(chi2_quantile(0.99, 5) == doctest::Approx(15.08627246938899).epsilon(1e-8));
    CHECK(chi2_quantile(0.99, 29) == doctest::Approx(49.58788447289881).epsilon(1e-8));
    CHECK(chi2_quantile(0.99, 40) == doctest::Approx(63.690739751564465).epsilon(1e-8));
    CHECK(chi2_quantile(0.99, 100) == doctest::Approx(135.80672317102676).epsilon(1e-8));
    CHECK(chi2_cdf(29.0, 29) == doctest::Approx(0.5349337587621208).epsilon(1e-9));
    CHECK_THROWS_AS(chi2_quantile(0.0, 5), std::invalid_argument);
}

TEST_CASE("chi-square goodness of fit") {
    // exact multinomial proportions give a zero statistic
    const Chi2Result exact = chi2_gof({100, 200, 300, 400}, {0.1, 0.2, 0.3, 0.4});
    CHECK(exact.statistic == doctest::Approx(0.0));
    CHECK(exact.p_value == doctest::Approx(1.0));
    CHECK(exact.df == 3);

    // hand-computed statistic for a perturbed table
    const Chi2Result off = chi2_gof({110, 190, 300, 400}, {0.1, 0.2, 0.3, 0.4});
    CHECK(off.statistic == doctest::Approx(100.0 / 100.0 + 100.0 / 200.0).epsilon(1e-12));
    CHECK(off.p_value > 0.0);
    CHECK(off.p_value < 1.0);

    CHECK_THROWS_AS(chi2_gof({1, 2}, {0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("histogram binning") {
    Histogram h(0.0, 1.0, 10);
    h.add(0.05);   // bin 0
    h.add(0.95);   // bin 9
    h.add(1.0);    // upper edge -> last bin
    h.add(-0.01);  // outside
    h.add(2.0);    // outside
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[9] == 2);
    CHECK(h.total == 3);
    CHECK(h.outside == 2);
    CHECK(h.bin_center(0) == doctest::Approx(0.05));
}

TEST_CASE("two-sample Kolmogorov-Smirnov") {
    CHECK(ks_statistic({1, 2, 3}, {1.5, 2.5, 3.5}) == doctest::Approx(1.0 / 3.0));
    CHECK(ks_statistic({1, 2, 3, 4}, {10, 11, 12}) == doctest::Approx(1.0));

    // c(0.01) = 1.6276..., times sqrt(2/200)
    CHECK(ks_critical(0.01, 200, 200) == doctest::Approx(0.16276236307187293).epsilon(1e-12));

    // equal distributions stay below the critical value (fixed seed via
    // deterministic construction)
    std::vector<double> a, b;
    for (int i = 0; i < 500; ++i) {
        a.push_back(std::sin(0.1 + i));
        b.push_back(std::sin(0.7 + i));
    }
    CHECK(ks_statistic(a, b) < ks_critical(0.01, a.size(), b.size()));
}
