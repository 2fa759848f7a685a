#include "qsd/reduction.hpp"

#include <cmath>
#include <cstdio>

#include "qsd/lindblad.hpp"

namespace qsd {

namespace {

VecN embed(const std::vector<int>& dynamical, const std::vector<int>& spectators,
           const VecN& x_dyn, const VecN& x_spec, int full_dim) {
    VecN full = VecN::zeros(full_dim);
    for (size_t m = 0; m < dynamical.size(); ++m) full[dynamical[m]] = x_dyn[m];
    for (size_t l = 0; l < spectators.size(); ++l) full[spectators[l]] = x_spec[l];
    return full;
}

}  // namespace

Reduced reduce(const SdeSystem& full, const std::vector<int>& spectator_indices,
               std::function<VecN(const VecN&)> reconstruct,
               std::function<void(VecN&)> project, double null_tol) {
    const int n = full.dim;
    const int m = full.noise_dim;
    const int l = n - m;
    if (static_cast<int>(spectator_indices.size()) != l)
        throw std::invalid_argument("reduce: spectator count must equal N - M");

    std::vector<int> dynamical;
    for (int i = 0; i < n; ++i) {
        bool spec = false;
        for (int s : spectator_indices) spec |= (s == i);
        if (!spec) dynamical.push_back(i);
    }

    ReductionMap map;
    map.dynamical = dynamical;
    map.spectators = spectator_indices;

    Reduced out;
    if (l == 0) {  // already M = N: identity reduction
        map.identity = true;
        map.full_point = [](const VecN& x) { return x; };
        map.noise_dyn_rows = full.noise;
        out.system = full;
        out.map = map;
        return out;
    }

    auto full_point = [dynamical, spectator_indices, reconstruct, n](const VecN& x_dyn) {
        return embed(dynamical, spectator_indices, x_dyn, reconstruct(x_dyn), n);
    };
    map.full_point = full_point;

    auto noise_full = full.noise;
    map.noise_dyn_rows = [noise_full, dynamical, m](const VecN& x_full) {
        const MatNM b = noise_full(x_full);
        MatNM rows = MatNM::zeros(static_cast<int>(dynamical.size()), m);
        for (size_t i = 0; i < dynamical.size(); ++i)
            for (int j = 0; j < m; ++j) rows(static_cast<int>(i), j) = b(dynamical[i], j);
        return rows;
    };

    // P/Q blocks from a numeric null basis of the full diffusion matrix.
    auto blocks = [full, full_point, dynamical, spectator_indices, null_tol,
                   l](const VecN& x_dyn) {
        const VecN xf = full_point(x_dyn);
        const std::vector<VecN> basis = null_eigenvectors(diffusion_matrix(full, xf), null_tol);
        if (static_cast<int>(basis.size()) != l) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "reduce: found %zu null eigenvectors, expected %d", basis.size(), l);
            throw SingularReductionError(msg);
        }
        MatNM p = MatNM::zeros(l, l);
        MatNM q = MatNM::zeros(l, static_cast<int>(dynamical.size()));
        for (int k = 0; k < l; ++k) {
            for (size_t c = 0; c < spectator_indices.size(); ++c)
                p(k, static_cast<int>(c)) = basis[k][spectator_indices[c]];
            for (size_t c = 0; c < dynamical.size(); ++c)
                q(k, static_cast<int>(c)) = basis[k][dynamical[c]];
        }
        return std::pair<MatNM, MatNM>(p, q);
    };

    map.p_block = [blocks](const VecN& x) { return blocks(x).first; };
    map.q_block = [blocks](const VecN& x) { return blocks(x).second; };
    map.r_block = [blocks](const VecN& x) {
        const auto [p, q] = blocks(x);
        double det = 0;
        const MatNM pinv = invert(p, det);
        if (!std::isfinite(det) || std::abs(det) < 1e-14)
            throw SingularReductionError("reduce: spectator block P is singular here");
        MatNM r = pinv * q;
        for (int i = 0; i < r.rows; ++i)
            for (int j = 0; j < r.cols; ++j) r(i, j) = -r(i, j);
        return r;
    };

    SdeSystem red;
    red.dim = static_cast<int>(dynamical.size());
    red.noise_dim = m;
    for (int i : dynamical) red.labels.push_back(full.labels[i]);
    red.parity = VecN::zeros(red.dim);
    for (size_t i = 0; i < dynamical.size(); ++i) red.parity[i] = full.parity[dynamical[i]];

    auto drift_full = full.drift;
    red.drift = [drift_full, full_point, dynamical](const VecN& x_dyn) {
        const VecN a = drift_full(full_point(x_dyn));
        VecN out = VecN::zeros(static_cast<int>(dynamical.size()));
        for (size_t i = 0; i < dynamical.size(); ++i) out[i] = a[dynamical[i]];
        return out;
    };
    auto noise_rows = map.noise_dyn_rows;
    red.noise = [noise_rows, full_point](const VecN& x_dyn) {
        return noise_rows(full_point(x_dyn));
    };
    red.project = project;
    red.in_domain = [full, full_point](const VecN& x_dyn) {
        return !full.in_domain || full.in_domain(full_point(x_dyn));
    };

    out.system = std::move(red);
    out.map = std::move(map);
    return out;
}

Reduced reduce_bloch_xz(double f0) {
    if (f0 <= 0.0) throw std::invalid_argument("reduce_bloch_xz: f0 must be > 0");
    const SdeSystem full = build_bloch_sde(raising_lowering_ops());

    auto reconstruct = [f0](const VecN& xz) {
        const double s = 1.0 - xz[0] * xz[0] - xz[1] * xz[1];
        return VecN{std::sqrt(std::max(0.0, s) / f0)};
    };
    auto project = [](VecN& xz) {
        const double n2 = xz.norm2();
        if (n2 > 1.0) {
            const double s = 1.0 / std::sqrt(n2);
            xz[0] *= s;
            xz[1] *= s;
        }
    };
    return reduce(full, {1}, reconstruct, project);
}

MatNM bloch_xz_diffusion_closed(double x, double z) {
    MatNM d = MatNM::zeros(2, 2);
    const double x2 = x * x;
    d(0, 0) = x2 * x2 - 2.0 * x2 + z * z + 1.0;
    d(0, 1) = d(1, 0) = x * z * (x2 - 2.0);
    d(1, 1) = x2 * (z * z + 1.0);
    return d;
}

double modified_derivative(const ReductionMap& map,
                           const std::function<double(const VecN&)>& field_full,
                           const VecN& x_dyn, int m, double h) {
    const VecN xf = map.full_point(x_dyn);
    auto partial = [&](int full_index) {
        VecN hi = xf, lo = xf;
        hi[full_index] += h;
        lo[full_index] -= h;
        return (field_full(hi) - field_full(lo)) / (2.0 * h);
    };

    double d = partial(map.dynamical[m]);
    if (map.identity) return d;
    const MatNM r = map.r_block(x_dyn);
    for (size_t l = 0; l < map.spectators.size(); ++l)
        d += partial(map.spectators[l]) * r(static_cast<int>(l), m);
    return d;
}

ConstantResidual verify_constant(const SdeSystem& sys,
                                 const std::function<double(const VecN&)>& f, const VecN& x,
                                 double h) {
    const int n = sys.dim;
    const VecN a = sys.drift(x);
    const MatNM b = sys.noise(x);
    const MatNM d = diffusion_from_noise(b);

    // Second differences lose two powers of h to rounding, so the Hessian
    // uses a step near eps^{1/4} even when h is smaller.
    const double h2 = std::max(h, 9e-5);

    VecN grad = VecN::zeros(n);
    for (int i = 0; i < n; ++i) {
        VecN hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        grad[i] = (f(hi) - f(lo)) / (2.0 * h);
    }

    ConstantResidual res;
    res.noise = VecN::zeros(sys.noise_dim);
    const double f0 = f(x);
    for (int i = 0; i < n; ++i) {
        res.drift += grad[i] * a[i];
        for (int j = 0; j < n; ++j) {
            double hess;
            if (i == j) {
                VecN hi = x, lo = x;
                hi[i] += h2;
                lo[i] -= h2;
                hess = (f(hi) - 2.0 * f0 + f(lo)) / (h2 * h2);
            } else {
                VecN pp = x, pm = x, mp = x, mm = x;
                pp[i] += h2; pp[j] += h2;
                pm[i] += h2; pm[j] -= h2;
                mp[i] -= h2; mp[j] += h2;
                mm[i] -= h2; mm[j] -= h2;
                hess = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h2 * h2);
            }
            res.drift += hess * d(i, j);
        }
    }
    for (int j = 0; j < sys.noise_dim; ++j)
        for (int i = 0; i < n; ++i) res.noise[j] += grad[i] * b(i, j);
    return res;
}

}  // namespace qsd
