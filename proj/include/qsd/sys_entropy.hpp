#pragma once

#include <vector>

#include "qsd/fpe.hpp"
#include "qsd/integrate.hpp"
#include "qsd/stationary.hpp"

namespace qsd {

// Floor applied inside logarithms of densities; cells below kEmptyCell are
// treated as empty and excluded from boundary evaluations.
inline constexpr double kLogFloor = 1e-300;
inline constexpr double kEmptyCell = 1e-30;

// S_G = -int p ln p over the grid (empty cells contribute zero).
double gibbs_entropy(const Pdf1DGrid& grid);

// Endpoint differences entering the mean system entropy rate:
//   d<ds_sys> = dS_G/dt - [J ln p] - [D dp/dx] - [D (d ln p/dx)^2 P(ds_sys)],
// the last one evaluated at the states realizing the extremes of ds_sys and
// simplified through P(ds_sys) d(ds_sys) = p dx, which reduces it to D |dp/dx|.
struct BoundaryTerms {
    double j_lnp = 0;
    double d_dp = 0;
    double bhat = 0;
    double total() const { return j_lnp + d_dp + bhat; }
};
BoundaryTerms boundary_terms(const Fpe1D& fpe, const Pdf1DGrid& grid);

// [D p] between the domain ends: the correction to naive SDE averaging,
// d<x> = <A> dt - [D p] dt.
double boundary_term_dp(const Fpe1D& fpe, const Pdf1DGrid& grid);

// Same bracket from an analytic density. Endpoint values that come out
// indeterminate (0 * inf at a degenerate boundary) are resolved by
// extrapolation in sqrt(distance), which captures integrable inverse-sqrt
// singularities of the density.
double boundary_term_dp(const std::function<double(double)>& diffusion,
                        const StationaryPdf& pdf);

struct SysEntropySample {
    double t = 0;
    double gibbs = 0;
    BoundaryTerms terms;
};

// Per-snapshot Gibbs entropy and boundary terms, plus the mean system entropy
// production rate on each snapshot interval (dS_G/dt minus the interval
// midpoint boundary terms).
struct SysEntropySeries {
    std::vector<SysEntropySample> samples;
    std::vector<double> rate;  // size samples.size() - 1
};
SysEntropySeries ds_sys_mean(const Fpe1D& fpe, const std::vector<Pdf1DGrid>& series);

// Trajectory-level system entropy from a solved density series:
// ds_sys(t) = -[ln p(x_t, t) - ln p(x_0, 0)], interpolated in x and t.
// Fills traj.ds_sys and traj.ds_tot (requires ds_env already attached when
// totals are wanted).
void attach_system_entropy(Trajectory& traj, const std::vector<Pdf1DGrid>& series);

}  // namespace qsd
