#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsd/rng.hpp"
#include "qsd/sde_system.hpp"

namespace qsd {

struct IntegratorConfig {
    double dt = 1e-3;
    long long steps = 0;
    uint64_t seed = 0;
    int record_stride = 1;    // keep every k-th step (plus the initial state)
    bool record_noise = false;  // retain per-step Wiener increments (stride 1 only)
};

// Raised when a step produces a non-finite coordinate.
struct TrajectoryError : std::runtime_error {
    TrajectoryError(const std::string& msg, long long step_index, const VecN& state)
        : std::runtime_error(msg), step(step_index), state(state) {}
    long long step;
    VecN state;
};

struct Trajectory {
    std::vector<std::string> labels;
    std::vector<double> t;
    std::vector<VecN> x;    // recorded states, x[0] is the initial condition
    std::vector<VecN> dw;   // per-step Wiener increments if record_noise

    // Cumulative entropy ledger columns, aligned with t; empty until attached.
    std::vector<double> ds_env;
    std::vector<double> ds_sys;
    std::vector<double> ds_tot;
    int flagged_steps = 0;  // singular-region encounters skipped by the ledger

    double dt = 0;
    long long steps = 0;
    int record_stride = 1;

    bool full_resolution() const { return record_stride == 1; }
};

// One Euler-Maruyama step followed by the model's domain projection.
// dw components are N(0, dt) draws.
VecN em_step(const SdeSystem& sys, const VecN& x, const VecN& dw, double dt);

// Drives the integration, invoking observer(step_index, t_new, x_old, x_new, dw)
// after every step. The Wiener stream is fully determined by config.seed.
void integrate(const SdeSystem& sys, const IntegratorConfig& config, const VecN& init,
               const std::function<void(long long, double, const VecN&, const VecN&,
                                        const VecN&)>& observer);

Trajectory run_trajectory(const SdeSystem& sys, const IntegratorConfig& config,
                          const VecN& init);

}  // namespace qsd
