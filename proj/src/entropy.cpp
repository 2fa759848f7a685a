#include "qsd/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace qsd {

double Closed1D::coef_dx(double x) const { return (A(x) - dD(x)) / D(x); }

double Closed1D::coef_dt(double x) const {
    const double d = D(x), dd = dD(x);
    return dA(x) - A(x) * dd / d - d2D(x) + dd * dd / d;
}

double Closed1D::drift(double x) const {
    const double d = D(x), dd = dD(x), a = A(x);
    return a * a / d - 2.0 * a * dd / d + dA(x) - d2D(x) + dd * dd / d;
}

double Closed1D::noise_coef(double x) const {
    return (A(x) - dD(x)) * std::sqrt(2.0 * D(x)) / D(x);
}

double Closed1D::increment(double x, double dx, double dt) const {
    if (guard > 0.0 && (x < lo + guard || x > hi - guard)) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "closed-form entropy: %.17g within %.1e of the boundary",
                      x, guard);
        throw SingularRegionError(msg, VecN{x});
    }
    return coef_dx(x) * dx + coef_dt(x) * dt;
}

Closed1D entropy_z() {
    Closed1D e;
    e.A = [](double z) { return -2.0 * z; };
    e.dA = [](double) { return -2.0; };
    e.D = [](double z) { return 1.0 - z * z * z * z; };
    e.dD = [](double z) { return -4.0 * z * z * z; };
    e.d2D = [](double z) { return -12.0 * z * z; };
    e.lo = -1.0;
    e.hi = 1.0;
    e.guard = kSingularGuard;
    return e;
}

Closed1D entropy_theta() {
    Closed1D e;
    e.A = [](double t) { return 0.5 * std::sin(2.0 * t); };
    e.dA = [](double t) { return std::cos(2.0 * t); };
    e.D = [](double t) { const double c = std::cos(t); return 1.0 + c * c; };
    e.dD = [](double t) { return -std::sin(2.0 * t); };
    e.d2D = [](double t) { return -2.0 * std::cos(2.0 * t); };
    e.lo = 0.0;
    e.hi = M_PI;
    e.guard = 0.0;
    return e;
}

double ds_env_z(double z, double dz, double dt) {
    static const Closed1D form = entropy_z();
    return form.increment(z, dz, dt);
}

double ds_env_theta(double theta, double dtheta, double dt) {
    static const Closed1D form = entropy_theta();
    return form.increment(theta, dtheta, dt);
}

const EntropyClosures& bloch_xz_entropy_closures() {
    static const EntropyClosures closures = [] {
        EntropyClosures c;
        c.dA = [](const VecN&) {
            MatNM m = MatNM::zeros(2, 2);
            m(0, 0) = -1.0;
            m(1, 1) = -2.0;
            return m;
        };
        // D11 = x^4 - 2x^2 + z^2 + 1, D12 = xz(x^2 - 2), D22 = x^2(z^2 + 1)
        c.dD = [](const VecN& p, int k) {
            const double x = p[0], z = p[1];
            MatNM m = MatNM::zeros(2, 2);
            if (k == 0) {
                m(0, 0) = 4.0 * x * x * x - 4.0 * x;
                m(0, 1) = m(1, 0) = z * (3.0 * x * x - 2.0);
                m(1, 1) = 2.0 * x * (z * z + 1.0);
            } else {
                m(0, 0) = 2.0 * z;
                m(0, 1) = m(1, 0) = x * (x * x - 2.0);
                m(1, 1) = 2.0 * x * x * z;
            }
            return m;
        };
        c.d2D = [](const VecN& p, int k, int l) {
            const double x = p[0], z = p[1];
            MatNM m = MatNM::zeros(2, 2);
            if (k == 0 && l == 0) {
                m(0, 0) = 12.0 * x * x - 4.0;
                m(0, 1) = m(1, 0) = 6.0 * x * z;
                m(1, 1) = 2.0 * (z * z + 1.0);
            } else if (k == 1 && l == 1) {
                m(0, 0) = 2.0;
                m(0, 1) = m(1, 0) = 0.0;
                m(1, 1) = 2.0 * x * x;
            } else {
                m(0, 0) = 0.0;
                m(0, 1) = m(1, 0) = 3.0 * x * x - 2.0;
                m(1, 1) = 4.0 * x * z;
            }
            return m;
        };
        return c;
    }();
    return closures;
}

GeneralEntropy::GeneralEntropy(const SdeSystem& sys, const ReductionMap* map,
                               const EntropyClosures* closures, double fd_step)
    : sys_(&sys),
      map_(map),
      closures_(closures),
      h_(fd_step),
      h2_(std::max(fd_step, 1e-4)),
      all_even_(sys.all_even_parity()) {}

MatNM GeneralEntropy::d_at(const VecN& x) const { return diffusion_matrix(*sys_, x); }
VecN GeneralEntropy::drift_at(const VecN& x) const { return sys_->drift(x); }

double GeneralEntropy::increment(const VecN& x, const VecN& dx, double dt) const {
    const int m = sys_->dim;

    const MatNM d = d_at(x);
    double scale = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) scale = std::max(scale, std::abs(d(i, j)));
    double det = 0;
    const MatNM hinv = invert(d, det);
    double det_scale = 1;
    for (int i = 0; i < m; ++i) det_scale *= scale;
    if (scale == 0.0 || !std::isfinite(det) || std::abs(det) < 1e-13 * det_scale) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "general entropy: diffusion matrix singular (det=%.3e)",
                      det);
        throw SingularDiffusionError(msg, x);
    }

    // parity split of the drift
    const VecN a = drift_at(x);
    VecN airr = a, arev = VecN::zeros(m);
    if (!all_even_) {
        VecN flipped = x;
        for (int i = 0; i < m; ++i) flipped[i] *= sys_->parity[i];
        const VecN af = drift_at(flipped);
        for (int i = 0; i < m; ++i) {
            airr[i] = 0.5 * (a[i] + sys_->parity[i] * af[i]);
            arev[i] = 0.5 * (a[i] - sys_->parity[i] * af[i]);
        }
    }

    // first derivatives of the drift split and of D
    MatNM dairr = MatNM::zeros(m, m);
    MatNM darev = MatNM::zeros(m, m);
    std::array<MatNM, kMaxDim> dd;
    if (closures_) {
        dairr = closures_->dA(x);
        for (int k = 0; k < m; ++k) dd[k] = closures_->dD(x, k);
    } else {
        for (int k = 0; k < m; ++k) {
            VecN xp = x, xm = x;
            xp[k] += h_;
            xm[k] -= h_;
            const VecN ap = drift_at(xp), am = drift_at(xm);
            const MatNM dp = d_at(xp), dm = d_at(xm);
            dd[k] = MatNM::zeros(m, m);
            for (int i = 0; i < m; ++i) {
                double dai = (ap[i] - am[i]) / (2.0 * h_);
                if (all_even_) {
                    dairr(i, k) = dai;
                } else {
                    VecN fp = xp, fm = xm;
                    for (int l = 0; l < m; ++l) {
                        fp[l] *= sys_->parity[l];
                        fm[l] *= sys_->parity[l];
                    }
                    const VecN afp = drift_at(fp), afm = drift_at(fm);
                    const double dflip = (afp[i] - afm[i]) / (2.0 * h_);
                    dairr(i, k) = 0.5 * (dai + sys_->parity[i] * dflip);
                    darev(i, k) = 0.5 * (dai - sys_->parity[i] * dflip);
                }
                for (int j = 0; j < m; ++j) dd[k](i, j) = (dp(i, j) - dm(i, j)) / (2.0 * h_);
            }
        }
    }

    // divergence G_j = sum_n dD_jn/dx_n and its derivative dG_jk via second
    // derivatives of D
    VecN g = VecN::zeros(m);
    for (int j = 0; j < m; ++j)
        for (int n = 0; n < m; ++n) g[j] += dd[n](j, n);

    MatNM dg = MatNM::zeros(m, m);
    if (closures_) {
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j)
                for (int n = 0; n < m; ++n) dg(j, k) += closures_->d2D(x, n, k)(j, n);
    } else {
        const MatNM d0 = d;
        for (int k = 0; k < m; ++k) {
            for (int n = 0; n <= k; ++n) {
                MatNM d2;
                if (k == n) {
                    VecN xp = x, xm = x;
                    xp[k] += h2_;
                    xm[k] -= h2_;
                    const MatNM dp = d_at(xp), dm = d_at(xm);
                    d2 = MatNM::zeros(m, m);
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < m; ++j)
                            d2(i, j) = (dp(i, j) - 2.0 * d0(i, j) + dm(i, j)) / (h2_ * h2_);
                } else {
                    VecN pp = x, pm = x, mp = x, mm = x;
                    pp[k] += h2_; pp[n] += h2_;
                    pm[k] += h2_; pm[n] -= h2_;
                    mp[k] -= h2_; mp[n] += h2_;
                    mm[k] -= h2_; mm[n] -= h2_;
                    const MatNM dpp = d_at(pp), dpm = d_at(pm), dmp = d_at(mp), dmm = d_at(mm);
                    d2 = MatNM::zeros(m, m);
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < m; ++j)
                            d2(i, j) = (dpp(i, j) - dpm(i, j) - dmp(i, j) + dmm(i, j)) /
                                       (4.0 * h2_ * h2_);
                }
                // dG_jk = sum_n d2D_jn/(dx_n dx_k); d2 is symmetric in (k,n)
                for (int j = 0; j < m; ++j) {
                    dg(j, k) += d2(j, n);
                    if (n != k) dg(j, n) += d2(j, k);
                }
            }
        }
    }

    // dH_k = -H dD_k H
    std::array<MatNM, kMaxDim> dh;
    for (int k = 0; k < m; ++k) {
        const MatNM t = hinv * dd[k] * hinv;
        dh[k] = MatNM::zeros(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) dh[k](i, j) = -t(i, j);
    }

    // dx terms: H (A_irr - G) . dx
    double inc = 0;
    for (int j = 0; j < m; ++j) {
        double c = 0;
        for (int i = 0; i < m; ++i) c += hinv(i, j) * (airr[i] - g[i]);
        inc += c * dx[j];
    }

    // dt terms
    double tsum = 0;
    if (!all_even_) {
        for (int i = 0; i < m; ++i) tsum -= darev(i, i);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) tsum += hinv(i, j) * arev[i] * (g[j] - airr[j]);
    }
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                tsum += d(i, k) * (dh[k](i, j) * (airr[j] - g[j]) +
                                   hinv(i, j) * (dairr(j, k) - dg(j, k)));
    return inc + tsum * dt;
}

EnvIncrementFn make_env_increment(EntropyMethod method, const SdeSystem* sys,
                                  const ReductionMap* map, const EntropyClosures* closures) {
    switch (method) {
        case EntropyMethod::closed_z:
            return [](const VecN& x, const VecN& dx, double dt) {
                return ds_env_z(x[0], dx[0], dt);
            };
        case EntropyMethod::closed_theta:
            return [](const VecN& x, const VecN& dx, double dt) {
                return ds_env_theta(x[0], dx[0], dt);
            };
        case EntropyMethod::general: {
            if (!sys) throw std::invalid_argument("make_env_increment: general needs a system");
            auto eng = std::make_shared<GeneralEntropy>(*sys, map, closures);
            return [eng](const VecN& x, const VecN& dx, double dt) {
                return eng->increment(x, dx, dt);
            };
        }
    }
    throw std::logic_error("make_env_increment: unknown method");
}

void attach_entropy(Trajectory& traj, const EnvIncrementFn& inc) {
    if (!traj.full_resolution())
        throw std::invalid_argument("attach_entropy: needs a stride-1 trajectory");
    traj.ds_env.assign(traj.x.size(), 0.0);
    traj.flagged_steps = 0;
    double acc = 0;
    for (size_t k = 0; k + 1 < traj.x.size(); ++k) {
        const VecN dx = traj.x[k + 1] - traj.x[k];
        try {
            acc += inc(traj.x[k], dx, traj.dt);
        } catch (const SingularRegionError&) {
            ++traj.flagged_steps;
        } catch (const SingularDiffusionError&) {
            ++traj.flagged_steps;
        }
        traj.ds_env[k + 1] = acc;
    }
}

void attach_entropy(Trajectory& traj, EntropyMethod method, const SdeSystem* sys,
                    const ReductionMap* map, const EntropyClosures* closures) {
    attach_entropy(traj, make_env_increment(method, sys, map, closures));
}

}  // namespace qsd
