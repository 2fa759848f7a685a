#include "qsd/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "qsd/rng.hpp"

namespace qsd {

namespace {

struct Slot {
    Trajectory traj;
    bool failed = false;
    long long flagged = 0;
};

void run_one(const SdeSystem& sys, const IntegratorConfig& base, const VecN& init,
             uint64_t seed, const EnvIncrementFn* entropy, Slot& slot) {
    IntegratorConfig cfg = base;
    cfg.seed = seed;

    Trajectory& traj = slot.traj;
    traj.labels = sys.labels;
    traj.dt = cfg.dt;
    traj.steps = cfg.steps;
    traj.record_stride = cfg.record_stride;

    const long long n_records = cfg.steps / cfg.record_stride + 1;
    traj.t.reserve(n_records);
    traj.x.reserve(n_records);
    traj.t.push_back(0.0);
    traj.x.push_back(init);
    if (entropy) {
        traj.ds_env.reserve(n_records);
        traj.ds_env.push_back(0.0);
    }

    double acc = 0;
    try {
        integrate(sys, cfg, init,
                  [&](long long k, double t_new, const VecN& x_old, const VecN& x_new,
                      const VecN&) {
                      if (entropy) {
                          try {
                              acc += (*entropy)(x_old, x_new - x_old, cfg.dt);
                          } catch (const SingularRegionError&) {
                              ++slot.flagged;
                          } catch (const SingularDiffusionError&) {
                              ++slot.flagged;
                          }
                      }
                      if ((k + 1) % cfg.record_stride == 0) {
                          traj.t.push_back(t_new);
                          traj.x.push_back(x_new);
                          if (entropy) traj.ds_env.push_back(acc);
                      }
                  });
    } catch (const TrajectoryError&) {
        slot.failed = true;
    }
    traj.flagged_steps = static_cast<int>(slot.flagged);
}

}  // namespace

EnsembleResult run_ensemble(const SdeSystem& sys, const EnsembleConfig& config,
                            const VecN& init, const EnvIncrementFn* entropy) {
    if (config.n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");

    const uint64_t master = config.base.seed;
    std::vector<Slot> slots(config.n_traj);

    const int workers = std::max(1, std::min(config.workers, config.n_traj));
    if (workers == 1) {
        for (int i = 0; i < config.n_traj; ++i)
            run_one(sys, config.base, init, child_seed(master, i), entropy, slots[i]);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= config.n_traj) return;
                run_one(sys, config.base, init, child_seed(master, i), entropy, slots[i]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    EnsembleResult out;
    out.has_entropy = entropy != nullptr;

    // shared time grid from the first surviving trajectory
    size_t n_rec = 0;
    for (const auto& s : slots)
        if (!s.failed) {
            out.t = s.traj.t;
            n_rec = s.traj.t.size();
            break;
        }

    out.mean.assign(n_rec, VecN::zeros(sys.dim));
    out.var.assign(n_rec, VecN::zeros(sys.dim));
    if (out.has_entropy) {
        out.mean_ds_env.assign(n_rec, 0.0);
        out.var_ds_env.assign(n_rec, 0.0);
    }

    // Welford over trajectories, in index order for reproducibility
    long long n_seen = 0;
    for (int i = 0; i < config.n_traj; ++i) {
        const Slot& s = slots[i];
        if (s.failed) {
            ++out.failed;
            out.failed_indices.push_back(i);
            continue;
        }
        ++n_seen;
        out.flagged_steps_total += s.flagged;
        for (size_t k = 0; k < n_rec; ++k) {
            for (int c = 0; c < sys.dim; ++c) {
                const double delta = s.traj.x[k][c] - out.mean[k][c];
                out.mean[k][c] += delta / static_cast<double>(n_seen);
                out.var[k][c] += delta * (s.traj.x[k][c] - out.mean[k][c]);
            }
            if (out.has_entropy) {
                const double delta = s.traj.ds_env[k] - out.mean_ds_env[k];
                out.mean_ds_env[k] += delta / static_cast<double>(n_seen);
                out.var_ds_env[k] += delta * (s.traj.ds_env[k] - out.mean_ds_env[k]);
            }
        }
        out.final_state.push_back(s.traj.x.back());
        if (out.has_entropy) out.final_ds_env.push_back(s.traj.ds_env.back());
    }
    out.n_surviving = static_cast<int>(n_seen);

    const double denom = n_seen > 1 ? static_cast<double>(n_seen - 1) : 1.0;
    for (size_t k = 0; k < n_rec; ++k) {
        for (int c = 0; c < sys.dim; ++c) out.var[k][c] /= denom;
        if (out.has_entropy) out.var_ds_env[k] /= denom;
    }

    if (config.keep_trajectories) {
        out.trajectories.reserve(config.n_traj);
        for (auto& s : slots) out.trajectories.push_back(std::move(s.traj));
    }
    return out;
}

}  // namespace qsd
