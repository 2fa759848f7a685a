#include <doctest.h>

#include <cmath>

#include "qsd/ensemble.hpp"
#include "qsd/entropy.hpp"
#include "qsd/lindblad.hpp"
#include "qsd/stationary.hpp"

using namespace qsd;

TEST_CASE("closed-form z coefficients at frozen points") {
    const Closed1D e = entropy_z();

    CHECK(e.drift(0.0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(e.coef_dt(0.0) == doctest::Approx(-2.0).epsilon(1e-15));

    // frozen from an independent symbolic evaluation
    CHECK(e.coef_dx(0.3) == doctest::Approx(-0.49601774372416574).epsilon(1e-14));
    CHECK(e.coef_dt(0.3) == doctest::Approx(-0.97356991632220990).epsilon(1e-14));
    CHECK(e.drift(0.3) == doctest::Approx(-0.67595927008771045).epsilon(1e-14));
    CHECK(e.noise_coef(0.3) == doctest::Approx(-0.69862827012981595).epsilon(1e-14));

    CHECK(e.coef_dx(-0.7) == doctest::Approx(0.036846953546519279).epsilon(1e-13));
    CHECK(e.coef_dt(-0.7) == doctest::Approx(3.8294459797341755).epsilon(1e-14));
    CHECK(e.drift(-0.7) == doctest::Approx(3.8810317146993025).epsilon(1e-14));
    CHECK(e.noise_coef(-0.7) == doctest::Approx(0.045424986500879443).epsilon(1e-12));

    // published coefficient shapes
    for (const double z : {0.2, -0.5, 0.85}) {
        const double z2 = z * z, z4 = z2 * z2, z6 = z4 * z2;
        CHECK(e.drift(z) ==
              doctest::Approx(2.0 * (-1.0 - 7.0 * z4 + 8.0 * z2 + 2.0 * z6) / (1.0 - z4))
                  .epsilon(1e-13));
        CHECK(e.noise_coef(z) ==
              doctest::Approx(2.0 * std::sqrt(2.0) * z * (2.0 * z2 - 1.0) / std::sqrt(1.0 - z4))
                  .epsilon(1e-13));
    }
}

TEST_CASE("closed-form theta coefficients") {
    const Closed1D e = entropy_theta();
    CHECK(e.drift(0.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.drift(M_PI / 2) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(e.drift(M_PI / 4) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(e.noise_coef(M_PI / 4) == doctest::Approx(1.7320508075688773).epsilon(1e-14));
    CHECK(e.drift(1.0) == doctest::Approx(0.19153998134401228).epsilon(1e-13));

    // drift matches (6 + 18 cos 2t + 3 sin^2 2t)/(4 (1 + cos^2 t))
    for (const double t : {0.4, 1.3, 2.8}) {
        const double c = std::cos(t);
        const double want =
            (6.0 + 18.0 * std::cos(2 * t) + 3.0 * std::pow(std::sin(2 * t), 2)) /
            (4.0 * (1.0 + c * c));
        CHECK(e.drift(t) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("increment forms at reference points") {
    const double dt = 1e-3;
    CHECK(ds_env_z(0.0, 0.0, dt) == doctest::Approx(-2.0 * dt).epsilon(1e-14));
    CHECK(ds_env_theta(M_PI / 2, 0.0, dt) == doctest::Approx(-3.0 * dt).epsilon(1e-14));
    CHECK(ds_env_theta(0.0, 0.0, dt) == doctest::Approx(3.0 * dt).epsilon(1e-14));
}

TEST_CASE("z form flags the singular band") {
    CHECK_THROWS_AS(ds_env_z(1.0 - 1e-7, 0.0, 1e-4), SingularRegionError);
    CHECK_THROWS_AS(ds_env_z(-0.9999999, 0.0, 1e-4), SingularRegionError);
    CHECK_NOTHROW(ds_env_z(1.0 - 1e-5, 0.0, 1e-4));
    CHECK_NOTHROW(ds_env_theta(1e-9, 0.0, 1e-4));  // theta has no band
}

TEST_CASE("general increment on the reduced (x,z) system matches the frozen oracle") {
    const Reduced red = reduce_bloch_xz(2.0);

    GeneralEntropy with_closures(red.system, &red.map, &bloch_xz_entropy_closures());
    GeneralEntropy with_fd(red.system, &red.map);

    // dx-coefficients (5, 5) and dt-coefficient 13.75 at (0.5, 0.5), so
    // increment(dx = 1e-3, dz = -2e-3, dt = 1e-4) = -3.625e-3
    const VecN x = {0.5, 0.5};
    const VecN dx = {1e-3, -2e-3};
    CHECK(with_closures.increment(x, dx, 1e-4) == doctest::Approx(-3.625e-3).epsilon(1e-12));
    CHECK(with_fd.increment(x, dx, 1e-4) == doctest::Approx(-3.625e-3).epsilon(1e-7));

    // finite differences agree with the polynomial closures pointwise
    for (const double xx : {-0.4, 0.2, 0.55}) {
        for (const double zz : {-0.5, 0.25, 0.6}) {
            const VecN p = {xx, zz};
            const VecN d = {-2e-4, 3e-4};
            CHECK(with_fd.increment(p, d, 1e-4) ==
                  doctest::Approx(with_closures.increment(p, d, 1e-4)).epsilon(1e-7));
        }
    }
}

TEST_CASE("general formula specializes to the 1-d closed forms") {
    const SdeSystem zsys = pure_state_sde(0.0);
    GeneralEntropy gen(zsys);
    const Closed1D closed = entropy_z();
    for (const double z : {-0.6, -0.1, 0.45, 0.8}) {
        for (const double dz : {-3e-3, 2e-3}) {
            CHECK(gen.increment({z}, {dz}, 1e-4) ==
                  doctest::Approx(closed.increment(z, dz, 1e-4)).epsilon(1e-9));
        }
    }
}

TEST_CASE("time-reversal parity split in the general formula") {
    // odd coordinate, drift a x + c, constant diffusion d0:
    // A_irr = a x, A_rev = c, and the increment reduces to
    //   (a x / d0) dx + (a - a c x / d0) dt
    const double a = -1.3, c = 0.7, d0 = 0.8;
    SdeSystem sys;
    sys.dim = 1;
    sys.noise_dim = 1;
    sys.labels = {"v"};
    sys.parity = {-1.0};
    sys.drift = [=](const VecN& x) { return VecN{a * x[0] + c}; };
    sys.noise = [=](const VecN&) {
        MatNM b = MatNM::zeros(1, 1);
        b(0, 0) = std::sqrt(2.0 * d0);
        return b;
    };

    GeneralEntropy gen(sys);
    for (const double x : {-0.9, 0.2, 1.4}) {
        for (const double dx : {-2e-3, 1e-3}) {
            const double want = (a * x / d0) * dx + (a - a * c * x / d0) * 1e-4;
            CHECK(gen.increment({x}, {dx}, 1e-4) == doctest::Approx(want).epsilon(1e-8));
        }
    }
}

TEST_CASE("drift with no irreversible part produces no environmental entropy") {
    // constant drift on an odd coordinate: A_irr = 0
    SdeSystem sys;
    sys.dim = 1;
    sys.noise_dim = 1;
    sys.labels = {"v"};
    sys.parity = {-1.0};
    sys.drift = [](const VecN&) { return VecN{0.4}; };
    sys.noise = [](const VecN&) {
        MatNM b = MatNM::zeros(1, 1);
        b(0, 0) = 1.0;
        return b;
    };

    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 2000;
    cfg.seed = 9;
    Trajectory traj = run_trajectory(sys, cfg, {0.0});
    attach_entropy(traj, EntropyMethod::general, &sys);
    for (const double s : traj.ds_env) CHECK(std::abs(s) < 1e-10);
}

TEST_CASE("singular diffusion raises an error carrying the state") {
    const Reduced red = reduce_bloch_xz(2.0);
    GeneralEntropy gen(red.system, &red.map, &bloch_xz_entropy_closures());
    bool thrown = false;
    try {
        gen.increment({0.6, 0.8}, {1e-3, 1e-3}, 1e-4);  // on the pure circle
    } catch (const SingularDiffusionError& e) {
        thrown = true;
        CHECK(e.state[0] == doctest::Approx(0.6));
        CHECK(e.state[1] == doctest::Approx(0.8));
    }
    CHECK(thrown);
}

TEST_CASE("attach_entropy bookkeeping") {
    const SdeSystem sys = pure_state_sde(0.0);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 40000;
    cfg.seed = 3;
    Trajectory traj = run_trajectory(sys, cfg, {0.5});
    attach_entropy(traj, EntropyMethod::closed_z);

    CHECK(traj.ds_env.size() == traj.x.size());
    CHECK(traj.ds_env.front() == 0.0);
    for (const double s : traj.ds_env) CHECK(std::isfinite(s));
    // a run this long visits the singular band near |z| = 1
    CHECK(traj.flagged_steps > 0);

    Trajectory coarse = traj;
    coarse.record_stride = 10;
    CHECK_THROWS_AS(attach_entropy(coarse, EntropyMethod::closed_z), std::invalid_argument);
}

TEST_CASE("stationary theta ensemble produces no mean entropy") {
    const SdeSystem sys = theta_sde();
    const StationaryPdf pst = stationary_pdf_theta();
    const CdfSampler sampler(pst);

    const double T = 0.5, dt = 1e-4;
    const int n = 150;
    NormalSampler init_rng(2024);
    const EnvIncrementFn inc = make_env_increment(EntropyMethod::closed_theta);

    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.steps = static_cast<long long>(T / dt);
        cfg.seed = child_seed(555, i);
        cfg.record_stride = 1;
        Trajectory traj = run_trajectory(sys, cfg, {sampler(init_rng)});
        attach_entropy(traj, inc);
        const double rate = traj.ds_env.back() / T;
        sum += rate;
        sumsq += rate * rate;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1));
    CHECK(std::abs(mean) < 3.0 * se + 0.05);
}
