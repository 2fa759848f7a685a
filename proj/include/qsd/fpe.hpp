#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "qsd/sde_system.hpp"

namespace qsd {

struct FpeCflError : std::runtime_error {
    FpeCflError(const std::string& msg, double dt, double dt_max)
        : std::runtime_error(msg), dt(dt), dt_max(dt_max) {}
    double dt, dt_max;
};

// Cell-centered density on a fixed 1-d grid. Masses are p[i] * width(i).
struct Pdf1DGrid {
    std::vector<double> edges;  // size() + 1
    std::vector<double> p;      // densities at cell centers
    double time = 0;

    int size() const { return static_cast<int>(p.size()); }
    double center(int i) const { return 0.5 * (edges[i] + edges[i + 1]); }
    double width(int i) const { return edges[i + 1] - edges[i]; }
    double lo() const { return edges.front(); }
    double hi() const { return edges.back(); }
    double mass() const;

    static Pdf1DGrid uniform(double lo, double hi, int n);
    static Pdf1DGrid log_spaced(double lo, double hi, int n);  // lo > 0

    void fill(const std::function<double(double)>& f);  // f at cell centers
    void normalize();                                   // unit mass
    double value_at(double x) const;                    // piecewise-linear in x
};

// Conservative solver for dp/dt = -dJ/dx, J = A p - d(D p)/dx, with no-flux
// boundaries. Interface fluxes are exponentially fitted in u = D p, so the
// discrete stationary state integrates D p ~ exp(int A/D) exactly up to the
// midpoint rule; for smooth coefficients the scheme is second order and the
// flux form conserves mass to roundoff.
class Fpe1D {
public:
    enum class Scheme { explicit_euler, implicit_euler };

    Fpe1D(std::function<double(double)> drift, std::function<double(double)> diffusion);

    // Largest positivity-preserving explicit step for this grid.
    double max_stable_dt(const Pdf1DGrid& grid) const;

    // March state to t_end in steps of dt (the final step is shortened).
    // Explicit stepping rejects dt above max_stable_dt up front.
    Pdf1DGrid advance(Pdf1DGrid state, double dt, double t_end,
                      Scheme scheme = Scheme::explicit_euler) const;

    // Same march, returning evenly spaced snapshots (including initial and
    // final states).
    std::vector<Pdf1DGrid> advance_series(Pdf1DGrid state, double dt, double t_end,
                                          int n_snapshots,
                                          Scheme scheme = Scheme::explicit_euler) const;

    // Stationary state of the discrete scheme: zero flux through every
    // interface, accumulated in log space and normalized.
    Pdf1DGrid stationary(const Pdf1DGrid& geometry) const;

    double drift(double x) const { return a_(x); }
    double diffusion(double x) const { return d_(x); }

private:
    struct Coeffs {  // per-interface flux coefficients J_f = alpha p_{f-1} - beta p_f
        std::vector<double> alpha, beta;
    };
    Coeffs coeffs(const Pdf1DGrid& grid) const;
    void step_explicit(Pdf1DGrid& g, const Coeffs& c, double dt) const;
    void step_implicit(Pdf1DGrid& g, const Coeffs& c, double dt) const;

    std::function<double(double)> a_, d_;
};

// 1-d SDE system -> Fokker-Planck fields (A, D = B^2/2).
Fpe1D fpe_from_system(const SdeSystem& sys);

}  // namespace qsd
