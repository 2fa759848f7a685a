#include "qsd/integrate.hpp"

#include <cmath>
#include <cstdio>

namespace qsd {

VecN em_step(const SdeSystem& sys, const VecN& x, const VecN& dw, double dt) {
    const VecN a = sys.drift(x);
    const MatNM b = sys.noise(x);
    VecN out = x;
    for (int i = 0; i < sys.dim; ++i) {
        double inc = a[i] * dt;
        for (int j = 0; j < sys.noise_dim; ++j) inc += b(i, j) * dw[j];
        out[i] += inc;
    }
    if (!out.finite()) {
        char msg[160];
        std::snprintf(msg, sizeof(msg), "em_step: non-finite state (from %s = %.17g ...)",
                      sys.labels.empty() ? "x0" : sys.labels[0].c_str(), x[0]);
        throw TrajectoryError(msg, -1, x);
    }
    if (sys.project) sys.project(out);
    return out;
}

void integrate(const SdeSystem& sys, const IntegratorConfig& config, const VecN& init,
               const std::function<void(long long, double, const VecN&, const VecN&,
                                        const VecN&)>& observer) {
    if (config.dt <= 0.0) throw std::invalid_argument("integrate: dt must be > 0");
    if (config.steps < 1) throw std::invalid_argument("integrate: steps must be >= 1");
    if (init.n != sys.dim) throw std::invalid_argument("integrate: initial point dimension");
    if (sys.in_domain && !sys.in_domain(init))
        throw std::invalid_argument("integrate: initial point outside the domain");

    NormalSampler normals(config.seed);
    const double root_dt = std::sqrt(config.dt);

    VecN x = init;
    VecN dw = VecN::zeros(sys.noise_dim);
    for (long long k = 0; k < config.steps; ++k) {
        for (int j = 0; j < sys.noise_dim; ++j) dw[j] = root_dt * normals.next();
        VecN next;
        try {
            next = em_step(sys, x, dw, config.dt);
        } catch (TrajectoryError& e) {
            throw TrajectoryError(e.what(), k, x);
        }
        observer(k, static_cast<double>(k + 1) * config.dt, x, next, dw);
        x = next;
    }
}

Trajectory run_trajectory(const SdeSystem& sys, const IntegratorConfig& config,
                          const VecN& init) {
    if (config.record_stride < 1)
        throw std::invalid_argument("run_trajectory: record_stride must be >= 1");
    if (config.record_noise && config.record_stride != 1)
        throw std::invalid_argument("run_trajectory: noise recording needs stride 1");

    Trajectory traj;
    traj.labels = sys.labels;
    traj.dt = config.dt;
    traj.steps = config.steps;
    traj.record_stride = config.record_stride;

    const long long n_records = config.steps / config.record_stride + 1;
    traj.t.reserve(n_records);
    traj.x.reserve(n_records);
    traj.t.push_back(0.0);
    traj.x.push_back(init);
    if (config.record_noise) traj.dw.reserve(config.steps);

    integrate(sys, config, init,
              [&](long long k, double t_new, const VecN&, const VecN& x_new, const VecN& dw) {
                  if (config.record_noise) traj.dw.push_back(dw);
                  if ((k + 1) % config.record_stride == 0) {
                      traj.t.push_back(t_new);
                      traj.x.push_back(x_new);
                  }
              });
    return traj;
}

}  // namespace qsd
