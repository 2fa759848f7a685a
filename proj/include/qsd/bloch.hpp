#pragma once

#include <cmath>
#include <stdexcept>

#include "qsd/mat2.hpp"

namespace qsd {

// Absolute slack on |r|^2 <= 1 for Bloch-ball membership.
inline constexpr double kBlochBallTol = 1e-9;

// Coherence (Bloch) vector coordinates of a 2x2 density matrix,
// rho = (I + x sx + y sy + z sz)/2.
struct BlochVector {
    double x = 0, y = 0, z = 0;

    double norm2() const { return x * x + y * y + z * z; }
    bool inside_ball(double tol = kBlochBallTol) const { return norm2() <= 1.0 + tol; }
};

inline Mat2 bloch_to_rho(const BlochVector& r) {
    if (!r.inside_ball())
        throw std::domain_error("bloch_to_rho: |r| > 1, not a physical state");
    Mat2 rho;
    rho(0, 0) = 0.5 * (1.0 + r.z);
    rho(0, 1) = 0.5 * cplx(r.x, -r.y);
    rho(1, 0) = 0.5 * cplx(r.x, r.y);
    rho(1, 1) = 0.5 * (1.0 - r.z);
    return rho;
}

inline BlochVector rho_to_bloch(const Mat2& rho) {
    BlochVector r;
    r.x = (rho(0, 1) + rho(1, 0)).real();
    r.y = (rho(0, 1) - rho(1, 0)).imag() * -1.0;
    r.z = (rho(0, 0) - rho(1, 1)).real();
    return r;
}

// P = Tr rho^2 = (1 + |r|^2)/2, in [1/2, 1].
inline double purity(const BlochVector& r) { return 0.5 * (1.0 + r.norm2()); }

// f = (1 - x^2 - z^2)/y^2, conserved along the raising/lowering dynamics.
// Undefined on the pure-state manifold y = 0, where the one-dimensional
// description in z (or theta) applies instead.
inline double constant_of_motion(const BlochVector& r) {
    if (r.y == 0.0)
        throw std::domain_error(
            "constant_of_motion: y = 0 (pure-state manifold, use the 1-d description)");
    return (1.0 - r.x * r.x - r.z * r.z) / (r.y * r.y);
}

// Polar angle on the pure circle in the x-z plane, theta in [0, pi].
struct PureAngle {
    double theta = 0;
};

inline PureAngle z_to_theta(double z) {
    if (std::abs(z) > 1.0)
        throw std::domain_error("z_to_theta: |z| > 1");
    return PureAngle{std::acos(z)};
}

inline double theta_to_z(PureAngle t) { return std::cos(t.theta); }

}  // namespace qsd
