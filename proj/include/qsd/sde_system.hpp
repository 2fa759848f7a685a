#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsd/smallvec.hpp"

namespace qsd {

// Ito system dx_i = A_i(x) dt + sum_j B_ij(x) dW_j on an N-dimensional phase
// space driven by M <= N independent Wiener processes. Immutable after
// construction; field evaluations are pure, so concurrent use is safe.
struct SdeSystem {
    int dim = 0;        // N
    int noise_dim = 0;  // M
    std::vector<std::string> labels;

    // Time-reversal parity per coordinate (+1 even, -1 odd). All models here
    // are even; the entropy formulas keep the general split.
    VecN parity;

    std::function<VecN(const VecN&)> drift;   // A(x)
    std::function<MatNM(const VecN&)> noise;  // B(x), N x M

    // Pulls discretization overshoot back into the domain after a step.
    std::function<void(VecN&)> project;
    std::function<bool(const VecN&)> in_domain;

    bool all_even_parity() const {
        for (int i = 0; i < parity.n; ++i)
            if (parity[i] < 0) return false;
        return true;
    }
};

// D = B B^T / 2 evaluated from a noise matrix.
inline MatNM diffusion_from_noise(const MatNM& b) {
    MatNM d = MatNM::zeros(b.rows, b.rows);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0;
            for (int k = 0; k < b.cols; ++k) s += b(i, k) * b(j, k);
            d(i, j) = d(j, i) = 0.5 * s;
        }
    return d;
}

inline MatNM diffusion_matrix(const SdeSystem& sys, const VecN& x) {
    return diffusion_from_noise(sys.noise(x));
}

}  // namespace qsd
