// Command-line front end: trajectory/ensemble simulation of the two-level
// quantum state diffusion models, stationary-distribution tools, a 1-d
// Fokker-Planck driver, and the built-in verification suite.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 verification failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "qsd/csv.hpp"
#include "qsd/ensemble.hpp"
#include "qsd/fpe.hpp"
#include "qsd/run_config.hpp"
#include "qsd/stationary.hpp"
#include "qsd/stats.hpp"
#include "qsd/sys_entropy.hpp"
#include "qsd/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerify = 3;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw qsd::ConfigError("cannot open output file '" + path + "'");
    return os;
}

void add_common(CLI::App* cmd, qsd::RunConfig& cfg) {
    cmd->add_option("--model", cfg.model,
                    "raising-lowering | weighted:<gamma> | pure-z[:<gamma>] | pure-theta");
    cmd->add_option("--frame", cfg.frame, "xyz | xz | z | theta (default from the model)");
    cmd->add_option("--dt", cfg.dt, "time step");
    cmd->add_option("--steps", cfg.steps, "number of steps");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--ntraj", cfg.n_traj, "trajectories in an ensemble");
    cmd->add_option("--init", cfg.init, "initial coordinates (comma separated)")
        ->delimiter(',');
    cmd->add_option("--out", cfg.out, "output CSV path");
    cmd->add_option("--stride", cfg.stride, "record every k-th step");
    cmd->add_option("--workers", cfg.workers, "ensemble worker threads");
    cmd->add_option("--f0", cfg.f0, "constraint level for the xz frame (default 2)");
    cmd->set_config("--config", "", "key=value config file; flags take precedence");
}

int cmd_simulate(const qsd::RunConfig& cfg) {
    const qsd::BuiltModel model = qsd::build_model(cfg);

    qsd::IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    icfg.steps = cfg.steps;
    icfg.seed = cfg.seed;
    icfg.record_stride = cfg.entropy ? 1 : cfg.stride;

    qsd::Trajectory traj = qsd::run_trajectory(model.system, icfg, model.init);
    if (cfg.entropy)
        qsd::attach_entropy(traj, model.entropy_method, &model.system,
                            model.map ? &*model.map : nullptr, model.closures);

    std::vector<std::string> cols = {"t"};
    for (const auto& c : model.columns) cols.push_back(c);
    if (cfg.entropy) cols.push_back("ds_env");

    auto os = open_out(cfg.out);
    qsd::csv::header(os, "trajectory v1", cols);
    // entropy runs integrate at stride 1; thin back to the requested stride here
    const size_t stride = cfg.entropy ? static_cast<size_t>(cfg.stride) : 1;
    for (size_t k = 0; k < traj.t.size(); ++k) {
        if (cfg.entropy && k % stride != 0 && k + 1 != traj.t.size()) continue;
        std::vector<double> row = {traj.t[k]};
        const qsd::VecN out = model.output(traj.x[k]);
        for (int c = 0; c < out.n; ++c) row.push_back(out[c]);
        if (cfg.entropy) row.push_back(traj.ds_env[k]);
        qsd::csv::row(os, row);
    }
    if (traj.flagged_steps > 0)
        std::cerr << "note: " << traj.flagged_steps
                  << " singular-region steps were skipped in the entropy ledger\n";
    return kExitOk;
}

int cmd_ensemble(const qsd::RunConfig& cfg, bool keep_traces) {
    const qsd::BuiltModel model = qsd::build_model(cfg);

    qsd::EnsembleConfig ecfg;
    ecfg.base.dt = cfg.dt;
    ecfg.base.steps = cfg.steps;
    ecfg.base.seed = cfg.seed;
    ecfg.base.record_stride = cfg.stride;
    ecfg.n_traj = cfg.n_traj;
    ecfg.workers = cfg.workers;
    ecfg.keep_trajectories = keep_traces;

    qsd::EnvIncrementFn inc;
    if (cfg.entropy)
        inc = qsd::make_env_increment(model.entropy_method, &model.system,
                                      model.map ? &*model.map : nullptr, model.closures);

    const qsd::EnsembleResult res =
        qsd::run_ensemble(model.system, ecfg, model.init, cfg.entropy ? &inc : nullptr);
    if (res.n_surviving == 0) {
        std::cerr << "error: all trajectories failed\n";
        return kExitNumerical;
    }
    if (res.failed > 0)
        std::cerr << "note: " << res.failed << " of " << cfg.n_traj
                  << " trajectories failed and were excluded\n";

    std::vector<std::string> cols = {"t"};
    for (const auto& c : model.columns) {
        cols.push_back("mean_" + c);
        cols.push_back("var_" + c);
    }
    if (cfg.entropy) {
        cols.push_back("mean_ds_env");
        cols.push_back("var_ds_env");
    }
    if (keep_traces && cfg.entropy)
        for (int i = 0; i < cfg.n_traj; ++i) cols.push_back("ds_env_" + std::to_string(i));

    auto os = open_out(cfg.out);
    qsd::csv::header(os, "ensemble v1", cols);
    for (size_t k = 0; k < res.t.size(); ++k) {
        std::vector<double> row = {res.t[k]};
        for (int c = 0; c < model.system.dim; ++c) {
            row.push_back(res.mean[k][c]);
            row.push_back(res.var[k][c]);
        }
        if (cfg.entropy) {
            row.push_back(res.mean_ds_env[k]);
            row.push_back(res.var_ds_env[k]);
        }
        if (keep_traces && cfg.entropy)
            for (const auto& traj : res.trajectories)
                row.push_back(traj.ds_env.empty() ? 0.0 : traj.ds_env[k]);
        qsd::csv::row(os, row);
    }
    return kExitOk;
}

int cmd_histogram(const qsd::RunConfig& cfg, int bins, long long burn_in, int thin) {
    const qsd::BuiltModel model = qsd::build_model(cfg);
    if (model.columns.size() != 1 ||
        (model.columns[0] != "z" && model.columns[0] != "theta"))
        throw qsd::ConfigError("histogram needs frame z or theta");
    if (cfg.steps <= burn_in) throw qsd::ConfigError("steps must exceed the burn-in");
    if (bins < 4) throw qsd::ConfigError("need at least 4 bins");
    if (thin < 1) throw qsd::ConfigError("thin must be >= 1");

    const bool is_theta = model.columns[0] == "theta";
    const qsd::StationaryPdf pdf =
        is_theta ? qsd::stationary_pdf_theta() : qsd::stationary_pdf_z();

    qsd::Histogram hist(pdf.lo, pdf.hi, bins);
    qsd::IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    icfg.steps = cfg.steps;
    icfg.seed = cfg.seed;
    qsd::integrate(model.system, icfg, model.init,
                   [&](long long k, double, const qsd::VecN&, const qsd::VecN& x,
                       const qsd::VecN&) {
                       if (k >= burn_in && (k - burn_in) % thin == 0)
                           hist.add(model.output(x)[0]);
                   });

    auto os = open_out(cfg.out);
    qsd::csv::header(os, "histogram v1",
                     {"bin_center", "count", "empirical_density", "analytic_density"});
    const double bin_w = (pdf.hi - pdf.lo) / bins;
    for (int i = 0; i < hist.bins(); ++i) {
        const double emp = hist.total > 0
                               ? static_cast<double>(hist.counts[i]) / (hist.total * bin_w)
                               : 0.0;
        qsd::csv::row(os, {hist.bin_center(i), static_cast<double>(hist.counts[i]), emp,
                           pdf.pdf(hist.bin_center(i))});
    }
    return kExitOk;
}

int cmd_stationary(const qsd::RunConfig& cfg, int points) {
    const qsd::BuiltModel model = qsd::build_model(cfg);
    if (model.columns.size() != 1 ||
        (model.columns[0] != "z" && model.columns[0] != "theta"))
        throw qsd::ConfigError("stationary needs frame z or theta");
    if (points < 2) throw qsd::ConfigError("need at least 2 points");

    const bool is_theta = model.columns[0] == "theta";
    const qsd::StationaryPdf pdf =
        is_theta ? qsd::stationary_pdf_theta() : qsd::stationary_pdf_z();

    auto os = open_out(cfg.out);
    qsd::csv::header(os, "stationary v1", {model.columns[0], "density"});
    for (int i = 0; i <= points; ++i) {
        // stay a hair inside the ends; the z density is singular there
        const double w = (i + 0.5) / (points + 1.0);
        const double x = pdf.lo + (pdf.hi - pdf.lo) * w;
        qsd::csv::row(os, {x, pdf.pdf(x)});
    }
    return kExitOk;
}

int cmd_fpe(const qsd::RunConfig& cfg, int grid_n, double t_end, int snapshots,
            const std::string& scheme_name, const std::string& init_pdf) {
    const qsd::BuiltModel model = qsd::build_model(cfg);
    if (model.system.dim != 1)
        throw qsd::ConfigError("fpe needs a 1-d model (pure-z or pure-theta)");
    if (grid_n < 8) throw qsd::ConfigError("grid must have at least 8 cells");
    if (!(t_end > 0)) throw qsd::ConfigError("t-end must be > 0");
    if (snapshots < 2) throw qsd::ConfigError("need at least 2 snapshots");

    qsd::Fpe1D::Scheme scheme;
    if (scheme_name == "explicit")
        scheme = qsd::Fpe1D::Scheme::explicit_euler;
    else if (scheme_name == "implicit")
        scheme = qsd::Fpe1D::Scheme::implicit_euler;
    else
        throw qsd::ConfigError("scheme must be explicit or implicit");

    const bool is_theta = model.columns[0] == "theta";
    const double lo = is_theta ? 0.0 : -1.0;
    const double hi = is_theta ? M_PI : 1.0;
    const qsd::Fpe1D fpe = qsd::fpe_from_system(model.system);
    qsd::Pdf1DGrid grid = qsd::Pdf1DGrid::uniform(lo, hi, grid_n);

    if (init_pdf == "uniform") {
        grid.fill([](double) { return 1.0; });
    } else if (init_pdf == "stationary") {
        grid = fpe.stationary(grid);
    } else if (init_pdf.rfind("gaussian:", 0) == 0) {
        const double sigma = std::stod(init_pdf.substr(9));
        if (!(sigma > 0)) throw qsd::ConfigError("gaussian width must be > 0");
        const double mu = model.init[0];
        grid.fill([&](double x) { return std::exp(-0.5 * (x - mu) * (x - mu) / (sigma * sigma)); });
    } else {
        throw qsd::ConfigError("init-pdf must be uniform, stationary or gaussian:<sigma>");
    }
    grid.normalize();

    const auto series = fpe.advance_series(std::move(grid), cfg.dt, t_end, snapshots, scheme);

    auto os = open_out(cfg.out);
    qsd::csv::header(os, "fpe v1", {"t", model.columns[0], "p"});
    for (const auto& snap : series)
        for (int i = 0; i < snap.size(); ++i)
            qsd::csv::row(os, {snap.time, snap.center(i), snap.p[i]});
    return kExitOk;
}

int cmd_verify(uint64_t seed) {
    const auto results = qsd::run_verification(seed);
    for (const auto& r : results)
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    return qsd::all_passed(results) ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level quantum state diffusion: trajectories, entropy production, "
                 "stationary analysis"};
    app.require_subcommand(1);

    qsd::RunConfig cfg;
    bool keep_traces = false;
    int bins = 200;
    long long burn_in = 0;
    int thin = 1;
    int points = 400;
    int grid_n = 400;
    double t_end = 1.0;
    int snapshots = 5;
    std::string scheme = "explicit";
    std::string init_pdf = "gaussian:0.1";

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory");
    add_common(sim, cfg);
    sim->add_flag("--entropy", cfg.entropy, "attach the environmental entropy ledger");

    auto* ens = app.add_subcommand("ensemble", "integrate an ensemble and aggregate");
    add_common(ens, cfg);
    ens->add_flag("--entropy", cfg.entropy, "attach the environmental entropy ledger");
    ens->add_flag("--traces", keep_traces, "also write per-trajectory ds_env columns");

    auto* hist = app.add_subcommand("histogram", "empirical vs analytic stationary density");
    add_common(hist, cfg);
    hist->add_option("--bins", bins, "number of bins");
    hist->add_option("--burn-in", burn_in, "steps discarded before sampling");
    hist->add_option("--thin", thin, "keep every k-th post-burn-in step");

    auto* stat = app.add_subcommand("stationary", "tabulate the analytic stationary density");
    add_common(stat, cfg);
    stat->add_option("--points", points, "sample count");

    auto* fpe = app.add_subcommand("fpe", "solve the 1-d Fokker-Planck equation");
    add_common(fpe, cfg);
    fpe->add_option("--grid", grid_n, "number of cells");
    fpe->add_option("--t-end", t_end, "final time");
    fpe->add_option("--snapshots", snapshots, "snapshot count (incl. initial)");
    fpe->add_option("--scheme", scheme, "explicit | implicit");
    fpe->add_option("--init-pdf", init_pdf, "uniform | stationary | gaussian:<sigma>");

    auto* ver = app.add_subcommand("verify", "run the built-in verification suite");
    ver->add_option("--seed", cfg.seed, "seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(cfg);
        if (ens->parsed()) return cmd_ensemble(cfg, keep_traces);
        if (hist->parsed()) return cmd_histogram(cfg, bins, burn_in, thin);
        if (stat->parsed()) return cmd_stationary(cfg, points);
        if (fpe->parsed()) return cmd_fpe(cfg, grid_n, t_end, snapshots, scheme, init_pdf);
        if (ver->parsed()) return cmd_verify(cfg.seed == 1 ? 20260809 : cfg.seed);
    } catch (const qsd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
