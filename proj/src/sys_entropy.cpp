#include "qsd/sys_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsd {

namespace {

double safe_log(double p) { return std::log(std::max(p, kLogFloor)); }

// outermost cell index with usable density, searching inward from the end
int usable_cell(const Pdf1DGrid& g, bool upper) {
    const int n = g.size();
    if (upper) {
        for (int i = n - 1; i >= 0; --i)
            if (g.p[i] > kEmptyCell) return i;
    } else {
        for (int i = 0; i < n; ++i)
            if (g.p[i] > kEmptyCell) return i;
    }
    return upper ? n - 1 : 0;
}

// one-sided density slope at cell i toward the interior
double slope_at(const Pdf1DGrid& g, int i) {
    const int n = g.size();
    const int j = (i == 0) ? 1 : (i == n - 1 ? n - 2 : (g.p[i + 1] > kEmptyCell ? i + 1 : i - 1));
    return (g.p[std::max(i, j)] - g.p[std::min(i, j)]) /
           (g.center(std::max(i, j)) - g.center(std::min(i, j)));
}

double current_at(const Fpe1D& fpe, const Pdf1DGrid& g, int i) {
    // J = A p - d(D p)/dx, one-sided toward the interior
    const int n = g.size();
    const int j = (i == 0) ? 1 : (i == n - 1 ? n - 2 : i + 1);
    const int a = std::min(i, j), b = std::max(i, j);
    const double dDp = (fpe.diffusion(g.center(b)) * g.p[b] - fpe.diffusion(g.center(a)) * g.p[a]) /
                       (g.center(b) - g.center(a));
    return fpe.drift(g.center(i)) * g.p[i] - dDp;
}

}  // namespace

double gibbs_entropy(const Pdf1DGrid& grid) {
    double s = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const double p = grid.p[i];
        if (p > 0) s -= p * safe_log(p) * grid.width(i);
    }
    return s;
}

BoundaryTerms boundary_terms(const Fpe1D& fpe, const Pdf1DGrid& grid) {
    BoundaryTerms out;
    const int lo = usable_cell(grid, false);
    const int hi = usable_cell(grid, true);

    out.j_lnp = current_at(fpe, grid, hi) * safe_log(grid.p[hi]) -
                current_at(fpe, grid, lo) * safe_log(grid.p[lo]);
    out.d_dp = fpe.diffusion(grid.center(hi)) * slope_at(grid, hi) -
               fpe.diffusion(grid.center(lo)) * slope_at(grid, lo);

    // D |dp/dx| at the density extremes (the ds_sys range ends)
    int imin = lo, imax = lo;
    for (int i = lo; i <= hi; ++i) {
        if (grid.p[i] < grid.p[imin]) imin = i;
        if (grid.p[i] > grid.p[imax]) imax = i;
    }
    out.bhat = fpe.diffusion(grid.center(imin)) * std::abs(slope_at(grid, imin)) -
               fpe.diffusion(grid.center(imax)) * std::abs(slope_at(grid, imax));
    return out;
}

double boundary_term_dp(const Fpe1D& fpe, const Pdf1DGrid& grid) {
    const int lo = usable_cell(grid, false);
    const int hi = usable_cell(grid, true);
    return fpe.diffusion(grid.center(hi)) * grid.p[hi] -
           fpe.diffusion(grid.center(lo)) * grid.p[lo];
}

double boundary_term_dp(const std::function<double(double)>& diffusion,
                        const StationaryPdf& pdf) {
    auto end_value = [&](double endpoint, double inward) {
        const double direct = diffusion(endpoint) * pdf.pdf(endpoint);
        if (std::isfinite(direct)) return direct;
        // two-point extrapolation in sqrt(delta) toward the endpoint
        const double span = pdf.hi - pdf.lo;
        const double d1 = 1e-6 * span, d2 = 4e-6 * span;
        const double x1 = endpoint + inward * d1, x2 = endpoint + inward * d2;
        const double v1 = diffusion(x1) * pdf.pdf(x1);
        const double v2 = diffusion(x2) * pdf.pdf(x2);
        const double s1 = std::sqrt(d1), s2 = std::sqrt(d2);
        return (v1 * s2 - v2 * s1) / (s2 - s1);
    };
    return end_value(pdf.hi, -1.0) - end_value(pdf.lo, +1.0);
}

SysEntropySeries ds_sys_mean(const Fpe1D& fpe, const std::vector<Pdf1DGrid>& series) {
    if (series.size() < 2) throw std::invalid_argument("ds_sys_mean: need >= 2 snapshots");
    SysEntropySeries out;
    out.samples.reserve(series.size());
    for (const auto& g : series)
        out.samples.push_back({g.time, gibbs_entropy(g), boundary_terms(fpe, g)});
    out.rate.reserve(series.size() - 1);
    for (size_t k = 0; k + 1 < series.size(); ++k) {
        const auto& s0 = out.samples[k];
        const auto& s1 = out.samples[k + 1];
        const double dt = s1.t - s0.t;
        if (!(dt > 0)) throw std::invalid_argument("ds_sys_mean: snapshots must advance in time");
        const double dsg = (s1.gibbs - s0.gibbs) / dt;
        const double terms = 0.5 * (s0.terms.total() + s1.terms.total());
        out.rate.push_back(dsg - terms);
    }
    return out;
}

void attach_system_entropy(Trajectory& traj, const std::vector<Pdf1DGrid>& series) {
    if (series.empty()) throw std::invalid_argument("attach_system_entropy: empty series");
    if (traj.x.empty() || traj.labels.size() != 1)
        throw std::invalid_argument("attach_system_entropy: needs a recorded 1-d trajectory");

    auto log_p = [&](double x, double t) {
        // bracket t within the snapshot series, then interpolate ln p linearly
        size_t hi = 0;
        while (hi + 1 < series.size() && series[hi].time < t) ++hi;
        const size_t lo = hi > 0 ? hi - 1 : 0;
        const double t0 = series[lo].time, t1 = series[hi].time;
        const double l0 = safe_log(series[lo].value_at(x));
        const double l1 = safe_log(series[hi].value_at(x));
        if (hi == lo || t1 <= t0) return l1;
        const double w = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
        return (1.0 - w) * l0 + w * l1;
    };

    const double ref = log_p(traj.x[0][0], traj.t[0]);
    traj.ds_sys.resize(traj.x.size());
    for (size_t k = 0; k < traj.x.size(); ++k)
        traj.ds_sys[k] = -(log_p(traj.x[k][0], traj.t[k]) - ref);

    if (traj.ds_env.size() == traj.ds_sys.size()) {
        traj.ds_tot.resize(traj.ds_sys.size());
        for (size_t k = 0; k < traj.ds_sys.size(); ++k)
            traj.ds_tot[k] = traj.ds_env[k] + traj.ds_sys[k];
    }
}

}  // namespace qsd
