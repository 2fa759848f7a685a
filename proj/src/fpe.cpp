#include "qsd/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qsd {

namespace {

// B(x) = x / (e^x - 1), the exponential-fitting weight.
double bernoulli_b(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
    if (x > 700.0) return 0.0;
    if (x < -700.0) return -x;
    return x / std::expm1(x);
}

}  // namespace

double Pdf1DGrid::mass() const {
    double m = 0;
    for (int i = 0; i < size(); ++i) m += p[i] * width(i);
    return m;
}

Pdf1DGrid Pdf1DGrid::uniform(double lo, double hi, int n) {
    if (!(hi > lo) || n < 3) throw std::invalid_argument("Pdf1DGrid::uniform: bad domain");
    Pdf1DGrid g;
    g.edges.resize(n + 1);
    for (int i = 0; i <= n; ++i) g.edges[i] = lo + (hi - lo) * i / n;
    g.edges.back() = hi;
    g.p.assign(n, 0.0);
    return g;
}

Pdf1DGrid Pdf1DGrid::log_spaced(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 3)
        throw std::invalid_argument("Pdf1DGrid::log_spaced: bad domain");
    Pdf1DGrid g;
    g.edges.resize(n + 1);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i <= n; ++i) g.edges[i] = std::exp(llo + (lhi - llo) * i / n);
    g.edges.front() = lo;
    g.edges.back() = hi;
    g.p.assign(n, 0.0);
    return g;
}

void Pdf1DGrid::fill(const std::function<double(double)>& f) {
    for (int i = 0; i < size(); ++i) p[i] = f(center(i));
}

void Pdf1DGrid::normalize() {
    const double m = mass();
    if (!(m > 0)) throw std::runtime_error("Pdf1DGrid::normalize: nonpositive mass");
    for (auto& v : p) v /= m;
}

double Pdf1DGrid::value_at(double x) const {
    const int n = size();
    if (x <= center(0)) return p[0];
    if (x >= center(n - 1)) return p[n - 1];
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (center(mid) <= x ? lo : hi) = mid;
    }
    const double w = (x - center(lo)) / (center(hi) - center(lo));
    return (1.0 - w) * p[lo] + w * p[hi];
}

Fpe1D::Fpe1D(std::function<double(double)> drift, std::function<double(double)> diffusion)
    : a_(std::move(drift)), d_(std::move(diffusion)) {}

Fpe1D::Coeffs Fpe1D::coeffs(const Pdf1DGrid& grid) const {
    const int n = grid.size();
    Coeffs c;
    c.alpha.assign(n + 1, 0.0);  // boundary interfaces stay zero: no flux
    c.beta.assign(n + 1, 0.0);
    for (int f = 1; f < n; ++f) {
        const double cl = grid.center(f - 1), cr = grid.center(f);
        const double delta = cr - cl;
        const double xm = 0.5 * (cl + cr);
        const double dm = d_(xm);
        if (!(dm > 0))
            throw std::runtime_error("Fpe1D: diffusion must be positive at interior interfaces");
        const double v = a_(xm) / dm * delta;
        c.alpha[f] = bernoulli_b(-v) * d_(cl) / delta;
        c.beta[f] = bernoulli_b(v) * d_(cr) / delta;
    }
    return c;
}

double Fpe1D::max_stable_dt(const Pdf1DGrid& grid) const {
    const Coeffs c = coeffs(grid);
    const int n = grid.size();
    double dt_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double out = c.alpha[i + 1] + c.beta[i];  // outflow coefficients of cell i
        if (out > 0) dt_max = std::min(dt_max, grid.width(i) / out);
    }
    return 0.95 * dt_max;
}

void Fpe1D::step_explicit(Pdf1DGrid& g, const Coeffs& c, double dt) const {
    const int n = g.size();
    static thread_local std::vector<double> flux;
    flux.assign(n + 1, 0.0);
    for (int f = 1; f < n; ++f) flux[f] = c.alpha[f] * g.p[f - 1] - c.beta[f] * g.p[f];
    for (int i = 0; i < n; ++i) g.p[i] -= dt * (flux[i + 1] - flux[i]) / g.width(i);
}

void Fpe1D::step_implicit(Pdf1DGrid& g, const Coeffs& c, double dt) const {
    const int n = g.size();
    static thread_local std::vector<double> lower, diag, upper, rhs;
    lower.assign(n, 0.0);
    diag.assign(n, 0.0);
    upper.assign(n, 0.0);
    rhs = g.p;
    for (int i = 0; i < n; ++i) {
        const double r = dt / g.width(i);
        lower[i] = -r * c.alpha[i];
        diag[i] = 1.0 + r * (c.alpha[i + 1] + c.beta[i]);
        upper[i] = -r * c.beta[i + 1];
    }
    // Thomas sweep
    for (int i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    g.p[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) g.p[i] = (rhs[i] - upper[i] * g.p[i + 1]) / diag[i];
}

Pdf1DGrid Fpe1D::advance(Pdf1DGrid state, double dt, double t_end, Scheme scheme) const {
    if (!(dt > 0)) throw std::invalid_argument("Fpe1D::advance: dt must be > 0");
    const Coeffs c = coeffs(state);
    if (scheme == Scheme::explicit_euler) {
        const double dt_max = max_stable_dt(state);
        if (dt > dt_max) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "Fpe1D: explicit dt=%.3e exceeds the stable limit %.3e for this grid",
                          dt, dt_max);
            throw FpeCflError(msg, dt, dt_max);
        }
    }
    while (state.time < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
        const double h = std::min(dt, t_end - state.time);
        if (scheme == Scheme::explicit_euler)
            step_explicit(state, c, h);
        else
            step_implicit(state, c, h);
        state.time += h;
    }
    return state;
}

std::vector<Pdf1DGrid> Fpe1D::advance_series(Pdf1DGrid state, double dt, double t_end,
                                             int n_snapshots, Scheme scheme) const {
    if (n_snapshots < 2) throw std::invalid_argument("advance_series: need >= 2 snapshots");
    std::vector<Pdf1DGrid> out;
    out.reserve(n_snapshots);
    out.push_back(state);
    const double t0 = state.time;
    for (int k = 1; k < n_snapshots; ++k) {
        const double tk = t0 + (t_end - t0) * k / (n_snapshots - 1);
        state = advance(std::move(state), dt, tk, scheme);
        out.push_back(state);
    }
    return out;
}

Pdf1DGrid Fpe1D::stationary(const Pdf1DGrid& geometry) const {
    const int n = geometry.size();
    Pdf1DGrid g = geometry;

    // log p accumulated through zero-flux conditions p_f / p_{f-1} = alpha/beta
    std::vector<double> logp(n, 0.0);
    for (int f = 1; f < n; ++f) {
        const double cl = g.center(f - 1), cr = g.center(f);
        const double delta = cr - cl;
        const double xm = 0.5 * (cl + cr);
        const double v = a_(xm) / d_(xm) * delta;
        logp[f] = logp[f - 1] + v + std::log(d_(cl)) - std::log(d_(cr));
    }
    const double peak = *std::max_element(logp.begin(), logp.end());
    for (int i = 0; i < n; ++i) g.p[i] = std::exp(logp[i] - peak);
    g.normalize();
    g.time = 0;
    return g;
}

Fpe1D fpe_from_system(const SdeSystem& sys) {
    if (sys.dim != 1 || sys.noise_dim != 1)
        throw std::invalid_argument("fpe_from_system: needs a 1-d system");
    auto drift = sys.drift;
    auto noise = sys.noise;
    return Fpe1D([drift](double x) { return drift(VecN{x})[0]; },
                 [noise](double x) {
                     const double b = noise(VecN{x})(0, 0);
                     return 0.5 * b * b;
                 });
}

}  // namespace qsd
