#pragma once

#include <vector>

#include "qsd/entropy.hpp"
#include "qsd/integrate.hpp"

namespace qsd {

struct EnsembleConfig {
    IntegratorConfig base;  // base.seed is the master seed
    int n_traj = 1;
    int workers = 1;
    bool keep_trajectories = false;
};

// Pointwise ensemble statistics on the recorded time grid. Trajectory i runs
// with child_seed(master, i), so results are identical for any worker count.
// Failed trajectories are excluded from the statistics and reported.
struct EnsembleResult {
    std::vector<double> t;
    std::vector<VecN> mean, var;  // per coordinate, sample variance (n-1)
    std::vector<double> mean_ds_env, var_ds_env;
    bool has_entropy = false;

    std::vector<Trajectory> trajectories;  // only when keep_trajectories
    std::vector<double> final_ds_env;      // per surviving trajectory, in index order
    std::vector<VecN> final_state;

    int n_surviving = 0;
    int failed = 0;
    std::vector<long long> failed_indices;
    long long flagged_steps_total = 0;
};

EnsembleResult run_ensemble(const SdeSystem& sys, const EnsembleConfig& config,
                            const VecN& init, const EnvIncrementFn* entropy = nullptr);

}  // namespace qsd
