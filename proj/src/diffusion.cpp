#include "qsd/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qsd {

EigenSym eigen_symmetric(const MatNM& s) {
    const int n = s.rows;
    MatNM a = s;
    MatNM v = MatNM::identity(n);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-300) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    // sort ascending by eigenvalue
    std::array<int, kMaxDim> order{};
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + n,
              [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenSym out;
    out.values = VecN::zeros(n);
    out.vectors = MatNM::zeros(n, n);
    for (int c = 0; c < n; ++c) {
        out.values[c] = a(order[c], order[c]);
        for (int r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
    }
    return out;
}

std::vector<VecN> null_eigenvectors(const MatNM& d, double tol) {
    const EigenSym eig = eigen_symmetric(d);
    const int n = d.rows;

    double scale = 0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(eig.values[i]));
    if (scale == 0.0) {  // zero matrix: everything is null
        std::vector<VecN> basis;
        for (int c = 0; c < n; ++c) basis.push_back(eig.vectors.col(c));
        return basis;
    }

    const double cut = tol * scale;
    std::vector<VecN> basis;
    for (int c = 0; c < n; ++c) {
        const double lam = std::abs(eig.values[c]);
        if (lam < cut) {
            basis.push_back(eig.vectors.col(c));
        } else if (lam < 10.0 * cut) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "null_eigenvectors: eigenvalue %.3e within ambiguous band [%.1e, %.1e]",
                          eig.values[c], cut, 10.0 * cut);
            throw AmbiguousRankError(msg, eig.values[c]);
        }
    }
    return basis;
}

}  // namespace qsd
