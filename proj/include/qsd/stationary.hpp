#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsd/quadrature.hpp"
#include "qsd/rng.hpp"

namespace qsd {

// Analytic stationary density on a bounded domain, shape + quadrature
// normalization. The shape may have integrable singularities at the ends.
struct StationaryPdf {
    std::string label;
    double lo = 0, hi = 0;
    std::function<double(double)> unnorm;
    double norm = 1;
    double norm_error = 0;

    double pdf(double x) const { return unnorm(x) / norm; }
};

// p_st(z) ~ (1 - z^4)^{-1/2} (1 + z^2)^{-1} on [-1, 1]; integrably singular
// at the ends, normalized with the endpoint-substituted quadrature.
StationaryPdf stationary_pdf_z();

// p_st(theta) ~ (1 + cos^2 theta)^{-3/2} on [0, pi]; smooth.
StationaryPdf stationary_pdf_theta();

// Inverse-CDF sampler over a tabulated CDF. Intended for smooth densities
// (sample theta and map through cos when a stationary z is needed).
class CdfSampler {
public:
    CdfSampler(const StationaryPdf& pdf, int table_size = 4096);
    double sample(double u01) const;
    double operator()(NormalSampler& rng) const { return sample(rng.uniform()); }

private:
    std::vector<double> x_, cdf_;
};

}  // namespace qsd
