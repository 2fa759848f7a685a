#include "qsd/stationary.hpp"

#include <cmath>
#include <stdexcept>

namespace qsd {

namespace {

StationaryPdf normalized(StationaryPdf pdf, bool endpoint_singular) {
    const QuadResult q =
        endpoint_singular
            ? integrate_endpoint_singular(pdf.unnorm, pdf.lo, pdf.hi, 1e-10)
            : integrate_gk(pdf.unnorm, pdf.lo, pdf.hi, 1e-12);
    if (!q.converged) {
        char msg[128];
        std::snprintf(msg, sizeof(msg),
                      "stationary pdf '%s': normalization quadrature did not converge "
                      "(error estimate %.3e)",
                      pdf.label.c_str(), q.abs_error);
        throw std::runtime_error(msg);
    }
    pdf.norm = q.value;
    pdf.norm_error = q.abs_error;
    return pdf;
}

}  // namespace

StationaryPdf stationary_pdf_z() {
    StationaryPdf pdf;
    pdf.label = "z";
    pdf.lo = -1.0;
    pdf.hi = 1.0;
    pdf.unnorm = [](double z) {
        const double z2 = z * z;
        return 1.0 / (std::sqrt(1.0 - z2 * z2) * (1.0 + z2));
    };
    return normalized(std::move(pdf), true);
}

StationaryPdf stationary_pdf_theta() {
    StationaryPdf pdf;
    pdf.label = "theta";
    pdf.lo = 0.0;
    pdf.hi = M_PI;
    pdf.unnorm = [](double t) {
        const double c = std::cos(t);
        return std::pow(1.0 + c * c, -1.5);
    };
    return normalized(std::move(pdf), false);
}

CdfSampler::CdfSampler(const StationaryPdf& pdf, int table_size) {
    if (table_size < 8) throw std::invalid_argument("CdfSampler: table too small");
    x_.resize(table_size + 1);
    cdf_.resize(table_size + 1);
    const double dx = (pdf.hi - pdf.lo) / table_size;

    x_[0] = pdf.lo;
    cdf_[0] = 0.0;
    double acc = 0.0;
    double f_prev = pdf.pdf(pdf.lo + 1e-12 * (pdf.hi - pdf.lo));
    for (int i = 1; i <= table_size; ++i) {
        x_[i] = pdf.lo + i * dx;
        const double xi = (i == table_size) ? pdf.hi - 1e-12 * (pdf.hi - pdf.lo) : x_[i];
        const double f = pdf.pdf(xi);
        acc += 0.5 * (f_prev + f) * dx;
        cdf_[i] = acc;
        f_prev = f;
    }
    for (auto& c : cdf_) c /= acc;  // exact unit range
}

double CdfSampler::sample(double u01) const {
    const double u = std::min(std::max(u01, 0.0), 1.0);
    // binary search for the bracketing table cell
    size_t lo = 0, hi = cdf_.size() - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        (cdf_[mid] <= u ? lo : hi) = mid;
    }
    const double span = cdf_[hi] - cdf_[lo];
    const double w = span > 0 ? (u - cdf_[lo]) / span : 0.5;
    return x_[lo] + w * (x_[hi] - x_[lo]);
}

}  // namespace qsd
