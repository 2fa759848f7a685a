#pragma once

#include <vector>

#include "qsd/bloch.hpp"
#include "qsd/mat2.hpp"
#include "qsd/sde_system.hpp"

namespace qsd {

// One environmental coupling channel. The weight enters the dynamics as
// sqrt(weight) * matrix, so weights scale rates linearly.
struct LindbladOperator {
    Mat2 matrix;
    double weight = 1.0;

    Mat2 scaled() const;
};

// Coupling operators for the minimal thermalising pair, expressed in the
// sigma_z eigenbasis with (1,0) the z=+1 state. raise_op moves population
// toward z=+1, lower_op toward z=-1.
Mat2 raise_op();
Mat2 lower_op();

// Channel order fixed as {raise, lower}; noise column j belongs to operator j.
std::vector<LindbladOperator> raising_lowering_ops();

// Detuned pair with weights (1 - gamma/2) on raise_op and (1 + gamma/2) on
// lower_op, biasing the stationary state to <z> = -gamma/2. Requires |gamma| < 2.
std::vector<LindbladOperator> weighted_thermal_ops(double gamma);

// dt coefficient contributed by one channel: c rho c+ - {c+ c, rho}/2.
Mat2 drift_increment(const Mat2& rho, const LindbladOperator& c);

// dW coefficient contributed by one channel: rho c+ + c rho - Tr[(c + c+) rho] rho.
Mat2 noise_increment(const Mat2& rho, const LindbladOperator& c);

// Projects the stochastic master equation onto Bloch coordinates, giving an
// N=3 system with one noise channel per operator. The Bloch image of each
// increment is real for Hermitian rho; the builder checks the imaginary
// residue stays below 1e-12 and truncates it.
SdeSystem build_bloch_sde(const std::vector<LindbladOperator>& ops);

// One-dimensional dynamics of z on the pure circle:
//   dz = -(gamma + 2z) dt + sqrt(2 (1-z^2)(1 + gamma z + z^2)) dW.
// gamma = 0 recovers dz = -2z dt + sqrt(2(1-z^4)) dW. Requires |gamma| < 2,
// otherwise the diffusion coefficient loses positivity inside (-1, 1).
SdeSystem pure_state_sde(double gamma);

// Same dynamics in theta = acos(z):
//   dtheta = (1/2) sin(2 theta) dt + sqrt(2 (1 + cos^2 theta)) dW,
// free of boundary degeneracy (D = 1 + cos^2 theta >= 1).
SdeSystem theta_sde();

}  // namespace qsd
