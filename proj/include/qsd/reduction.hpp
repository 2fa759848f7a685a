#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "qsd/diffusion.hpp"
#include "qsd/sde_system.hpp"

namespace qsd {

struct SingularReductionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bookkeeping for a restricted-diffusion reduction: which coordinates were
// kept (dynamical), which were eliminated (spectators), how to rebuild the
// full point, and the null-eigenvector blocks that close the derivatives of
// fields still depending on spectators.
//
// With L null eigenvectors alpha_k of the full diffusion matrix, P_kl holds
// their spectator components and Q_km their dynamical components; the
// spectator displacements follow dx_l = R_lm dx_m with R = -P^{-1} Q, and a
// field g picks up the modified derivative
//   dg/dx_m = partial g/partial x_m + sum_l (partial g/partial x_l) R_lm.
struct ReductionMap {
    std::vector<int> dynamical;
    std::vector<int> spectators;
    bool identity = false;  // no spectators; P/Q/R are empty

    // dynamical coords -> full coords, reconstructing spectators
    std::function<VecN(const VecN&)> full_point;
    // fields over the dynamical coordinates
    std::function<MatNM(const VecN&)> p_block;  // L x L
    std::function<MatNM(const VecN&)> q_block;  // L x M
    std::function<MatNM(const VecN&)> r_block;  // L x M, -P^{-1} Q

    // full noise matrix restricted to dynamical rows, evaluable at arbitrary
    // full-space points (needed for fixed-spectator partials)
    std::function<MatNM(const VecN&)> noise_dyn_rows;
};

struct Reduced {
    SdeSystem system;
    ReductionMap map;
};

// Drops the spectator rows of A and B, producing a nonsingular M-dimensional
// system. reconstruct maps dynamical coordinates to spectator values (the
// constraint solved for the spectators); project, when given, becomes the
// reduced system's domain projection. Requires #spectators == N - M and an
// invertible P at evaluation points (checked when R is evaluated).
Reduced reduce(const SdeSystem& full, const std::vector<int>& spectator_indices,
               std::function<VecN(const VecN&)> reconstruct,
               std::function<void(VecN&)> project = nullptr, double null_tol = 1e-10);

// The thermalising Bloch model with y eliminated. f0 fixes the constraint
// level (1 - x^2 - z^2)/y^2 = f0 from the initial point; the positive branch
// y = +sqrt((1 - x^2 - z^2)/f0) is used for reconstruction. The (x,z)
// dynamics themselves do not involve y.
Reduced reduce_bloch_xz(double f0);

// Closed form of the reduced (x,z) diffusion matrix, used as the verification
// surface for the matrix-built reduction.
MatNM bloch_xz_diffusion_closed(double x, double z);

// Modified derivative of a scalar field over the full coordinates, following
// the constraint surface: partial w.r.t. dynamical coordinate m at fixed
// spectators plus the R-weighted spectator partials.
double modified_derivative(const ReductionMap& map,
                           const std::function<double(const VecN&)>& field_full,
                           const VecN& x_dyn, int m, double h = 1e-6);

// Residuals of the Ito increment of f: the drift part
//   sum_i (df/dx_i) A_i + sum_ij (d2f/dx_i dx_j) D_ij
// and the noise coefficients sum_i (df/dx_i) B_ij. Both vanish for a constant
// of the motion. Derivatives by central differences with step h.
struct ConstantResidual {
    double drift = 0;
    VecN noise;
    double max_abs() const {
        double m = std::abs(drift);
        for (int j = 0; j < noise.n; ++j) m = std::max(m, std::abs(noise[j]));
        return m;
    }
};
ConstantResidual verify_constant(const SdeSystem& sys,
                                 const std::function<double(const VecN&)>& f, const VecN& x,
                                 double h = 1e-5);

}  // namespace qsd
