#include "qsd/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace qsd {

Mat2 LindbladOperator::scaled() const { return std::sqrt(weight) * matrix; }

Mat2 raise_op() {
    Mat2 m;
    m(0, 1) = 1.0;
    return m;
}

Mat2 lower_op() {
    Mat2 m;
    m(1, 0) = 1.0;
    return m;
}

std::vector<LindbladOperator> raising_lowering_ops() {
    return {{raise_op(), 1.0}, {lower_op(), 1.0}};
}

std::vector<LindbladOperator> weighted_thermal_ops(double gamma) {
    if (std::abs(gamma) >= 2.0)
        throw std::domain_error("weighted_thermal_ops: |gamma| must be < 2");
    return {{raise_op(), 1.0 - 0.5 * gamma}, {lower_op(), 1.0 + 0.5 * gamma}};
}

Mat2 drift_increment(const Mat2& rho, const LindbladOperator& op) {
    const Mat2 c = op.scaled();
    const Mat2 cd = c.dagger();
    const Mat2 cdc = cd * c;
    return c * rho * cd - 0.5 * (rho * cdc) - 0.5 * (cdc * rho);
}

Mat2 noise_increment(const Mat2& rho, const LindbladOperator& op) {
    const Mat2 c = op.scaled();
    const Mat2 cd = c.dagger();
    const cplx tr = ((c + cd) * rho).trace();
    return rho * cd + c * rho - tr * rho;
}

namespace {

// Real Bloch components of a (Hermitian) matrix increment, with a check that
// the imaginary residue is only roundoff.
VecN bloch_components(const Mat2& m) {
    const cplx sx = m(0, 1) + m(1, 0);
    const cplx sy = cplx(0.0, 1.0) * (m(0, 1) - m(1, 0));
    const cplx sz = m(0, 0) - m(1, 1);
    const double imag_residue =
        std::max({std::abs(sx.imag()), std::abs(sy.imag()), std::abs(sz.imag())});
    if (imag_residue > 1e-12)
        throw std::runtime_error("build_bloch_sde: non-real Bloch projection");
    return {sx.real(), sy.real(), sz.real()};
}

void renormalize_if_outside(VecN& r) {
    const double n2 = r.norm2();
    if (n2 > 1.0) {
        const double s = 1.0 / std::sqrt(n2);
        for (int i = 0; i < 3; ++i) r[i] *= s;
    }
}

}  // namespace

SdeSystem build_bloch_sde(const std::vector<LindbladOperator>& ops) {
    if (ops.empty())
        throw std::invalid_argument("build_bloch_sde: need at least one operator");

    SdeSystem sys;
    sys.dim = 3;
    sys.noise_dim = static_cast<int>(ops.size());
    sys.labels = {"x", "y", "z"};
    sys.parity = {1.0, 1.0, 1.0};

    sys.drift = [ops](const VecN& r) {
        const Mat2 rho = bloch_to_rho({r[0], r[1], r[2]});
        Mat2 sum;
        for (const auto& op : ops) sum += drift_increment(rho, op);
        return bloch_components(sum);
    };
    sys.noise = [ops](const VecN& r) {
        const Mat2 rho = bloch_to_rho({r[0], r[1], r[2]});
        MatNM b = MatNM::zeros(3, static_cast<int>(ops.size()));
        for (int j = 0; j < static_cast<int>(ops.size()); ++j) {
            const VecN col = bloch_components(noise_increment(rho, ops[j]));
            for (int i = 0; i < 3; ++i) b(i, j) = col[i];
        }
        return b;
    };
    sys.project = renormalize_if_outside;
    sys.in_domain = [](const VecN& r) { return r.norm2() <= 1.0 + kBlochBallTol; };
    return sys;
}

SdeSystem pure_state_sde(double gamma) {
    if (std::abs(gamma) >= 2.0)
        throw std::domain_error("pure_state_sde: |gamma| must be < 2");

    SdeSystem sys;
    sys.dim = 1;
    sys.noise_dim = 1;
    sys.labels = {"z"};
    sys.parity = {1.0};
    sys.drift = [gamma](const VecN& x) { return VecN{-(gamma + 2.0 * x[0])}; };
    sys.noise = [gamma](const VecN& x) {
        const double z = x[0];
        // Discretization can push |z| slightly past 1; clamp the radicand.
        const double d2 = 2.0 * (1.0 - z * z) * (1.0 + gamma * z + z * z);
        MatNM b = MatNM::zeros(1, 1);
        b(0, 0) = std::sqrt(std::max(0.0, d2));
        return b;
    };
    sys.project = [](VecN& x) { x[0] = std::clamp(x[0], -1.0, 1.0); };
    sys.in_domain = [](const VecN& x) { return std::abs(x[0]) <= 1.0; };
    return sys;
}

SdeSystem theta_sde() {
    SdeSystem sys;
    sys.dim = 1;
    sys.noise_dim = 1;
    sys.labels = {"theta"};
    sys.parity = {1.0};
    sys.drift = [](const VecN& x) { return VecN{0.5 * std::sin(2.0 * x[0])}; };
    sys.noise = [](const VecN& x) {
        const double c = std::cos(x[0]);
        MatNM b = MatNM::zeros(1, 1);
        b(0, 0) = std::sqrt(2.0 * (1.0 + c * c));
        return b;
    };
    sys.project = [](VecN& x) {
        double t = x[0];
        while (t < 0.0 || t > M_PI) {
            if (t < 0.0) t = -t;
            if (t > M_PI) t = 2.0 * M_PI - t;
        }
        x[0] = t;
    };
    sys.in_domain = [](const VecN& x) { return x[0] >= 0.0 && x[0] <= M_PI; };
    return sys;
}

}  // namespace qsd
