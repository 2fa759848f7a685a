#include <doctest.h>

#include <cmath>

#include "qsd/entropy.hpp"
#include "qsd/fpe.hpp"
#include "qsd/lindblad.hpp"
#include "qsd/stationary.hpp"
#include "qsd/sys_entropy.hpp"

using namespace qsd;

namespace {

Fpe1D theta_fpe() { return fpe_from_system(theta_sde()); }

double l1_distance(const Pdf1DGrid& a, const std::function<double(double)>& f) {
    double d = 0;
    for (int i = 0; i < a.size(); ++i) d += std::abs(a.p[i] - f(a.center(i))) * a.width(i);
    return d;
}

double l1_distance(const Pdf1DGrid& a, const Pdf1DGrid& b) {
    double d = 0;
    for (int i = 0; i < a.size(); ++i) d += std::abs(a.p[i] - b.p[i]) * a.width(i);
    return d;
}

}  // namespace

TEST_CASE("mass is conserved by both schemes") {
    const Fpe1D fpe = theta_fpe();
    Pdf1DGrid g = Pdf1DGrid::uniform(0.0, M_PI, 300);
    g.fill([](double t) { return std::exp(-8.0 * (t - 1.2) * (t - 1.2)); });
    g.normalize();

    const double dt_ex = 0.8 * fpe.max_stable_dt(g);
    const Pdf1DGrid after_ex = fpe.advance(g, dt_ex, 0.5, Fpe1D::Scheme::explicit_euler);
    CHECK(std::abs(after_ex.mass() - 1.0) < 1e-9);

    const Pdf1DGrid after_im = fpe.advance(g, 1e-3, 2.0, Fpe1D::Scheme::implicit_euler);
    CHECK(std::abs(after_im.mass() - 1.0) < 1e-9);
    for (const double p : after_im.p) CHECK(p >= 0.0);
}

TEST_CASE("explicit stepping rejects an unstable dt up front") {
    const Fpe1D fpe = theta_fpe();
    Pdf1DGrid g = Pdf1DGrid::uniform(0.0, M_PI, 300);
    g.fill([](double) { return 1.0; });
    g.normalize();

    const double limit = fpe.max_stable_dt(g);
    CHECK_THROWS_AS(fpe.advance(g, 2.0 * limit, 0.1, Fpe1D::Scheme::explicit_euler),
                    FpeCflError);
    CHECK_NOTHROW(fpe.advance(g, 0.9 * limit, 20.0 * limit, Fpe1D::Scheme::explicit_euler));
}

TEST_CASE("analytic stationary density is a fixed point") {
    const Fpe1D fpe = theta_fpe();
    const StationaryPdf pst = stationary_pdf_theta();

    Pdf1DGrid g = Pdf1DGrid::uniform(0.0, M_PI, 4000);
    g.fill([&](double t) { return pst.pdf(t); });
    g.normalize();

    const Pdf1DGrid after = fpe.advance(g, 1e-3, 1.0, Fpe1D::Scheme::implicit_euler);
    CHECK(l1_distance(after, g) < 1e-6);
}

TEST_CASE("a narrow bump relaxes to the stationary density") {
    const Fpe1D fpe = theta_fpe();
    const StationaryPdf pst = stationary_pdf_theta();

    Pdf1DGrid g = Pdf1DGrid::uniform(0.0, M_PI, 400);
    g.fill([](double t) { return std::exp(-200.0 * (t - M_PI / 2) * (t - M_PI / 2)); });
    g.normalize();

    const Pdf1DGrid relaxed = fpe.advance(g, 2e-3, 6.0, Fpe1D::Scheme::implicit_euler);
    CHECK(l1_distance(relaxed, [&](double t) { return pst.pdf(t); }) < 1e-3);
}

TEST_CASE("discrete stationary state converges at second order") {
    const Fpe1D fpe = theta_fpe();
    const StationaryPdf pst = stationary_pdf_theta();
    auto exact = [&](double t) { return pst.pdf(t); };

    const double e100 = l1_distance(fpe.stationary(Pdf1DGrid::uniform(0, M_PI, 100)), exact);
    const double e200 = l1_distance(fpe.stationary(Pdf1DGrid::uniform(0, M_PI, 200)), exact);
    const double e400 = l1_distance(fpe.stationary(Pdf1DGrid::uniform(0, M_PI, 400)), exact);

    CHECK(e100 / e200 > 3.0);
    CHECK(e100 / e200 < 5.5);
    CHECK(e200 / e400 > 3.0);
    CHECK(e200 / e400 < 5.5);
}

TEST_CASE("time marching reaches the averaging benchmark's stationary state") {
    // dx = x dt + x^2 dW
    const Fpe1D fpe([](double x) { return x; }, [](double x) { return 0.5 * x * x * x * x; });
    Pdf1DGrid g = Pdf1DGrid::log_spaced(1e-3, 100.0, 1500);
    g.fill([](double x) { return std::exp(-2.0 * (x - 1.0) * (x - 1.0)); });
    g.normalize();

    const Pdf1DGrid relaxed = fpe.advance(g, 5e-3, 30.0, Fpe1D::Scheme::implicit_euler);
    auto exact = [](double x) {
        return 4.0 / std::sqrt(M_PI) * std::pow(x, -4.0) * std::exp(-1.0 / (x * x));
    };
    CHECK(l1_distance(relaxed, exact) < 2e-3);
    CHECK(std::abs(relaxed.mass() - 1.0) < 1e-9);

    // and matches the direct zero-flux stationary solution
    CHECK(l1_distance(relaxed, fpe.stationary(g)) < 1e-3);

    // stationary mean <x> equals the boundary bracket 2/sqrt(pi)
    double mean = 0;
    const Pdf1DGrid st = fpe.stationary(g);
    for (int i = 0; i < st.size(); ++i) mean += st.center(i) * st.p[i] * st.width(i);
    CHECK(mean == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(2e-3));
}

TEST_CASE("Gibbs entropy and boundary terms of a uniform density") {
    const Fpe1D flat([](double) { return 0.0; }, [](double) { return 1.0; });
    Pdf1DGrid g = Pdf1DGrid::uniform(0.0, M_PI, 500);
    g.fill([](double) { return 1.0 / M_PI; });

    CHECK(gibbs_entropy(g) == doctest::Approx(std::log(M_PI)).epsilon(1e-12));
    const BoundaryTerms terms = boundary_terms(flat, g);
    CHECK(std::abs(terms.j_lnp) < 1e-12);
    CHECK(std::abs(terms.d_dp) < 1e-12);
    CHECK(std::abs(terms.bhat) < 1e-12);

    // uniform is stationary here: the rate stays zero
    const auto series = flat.advance_series(g, 1e-3, 0.5, 3, Fpe1D::Scheme::implicit_euler);
    const SysEntropySeries sys = ds_sys_mean(flat, series);
    for (const double r : sys.rate) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("stationary theta density: all boundary terms vanish") {
    const Fpe1D fpe = theta_fpe();
    const Pdf1DGrid st = fpe.stationary(Pdf1DGrid::uniform(0.0, M_PI, 800));

    const BoundaryTerms terms = boundary_terms(fpe, st);
    CHECK(std::abs(terms.j_lnp) < 1e-6);
    CHECK(std::abs(terms.d_dp) < 1e-3);
    CHECK(std::abs(terms.bhat) < 1e-3);

    const auto series = fpe.advance_series(st, 1e-3, 1.0, 3, Fpe1D::Scheme::implicit_euler);
    const SysEntropySeries sys = ds_sys_mean(fpe, series);
    CHECK(std::abs(sys.samples[0].gibbs - sys.samples.back().gibbs) < 1e-9);
}

TEST_CASE("z-frame boundary term [D dp/dz] diverges under refinement") {
    const StationaryPdf pz = stationary_pdf_z();
    const Fpe1D fpe = fpe_from_system(pure_state_sde(0.0));

    double prev = 0;
    for (const int n : {200, 400, 800, 1600}) {
        Pdf1DGrid g = Pdf1DGrid::uniform(-1.0, 1.0, n);
        g.fill([&](double z) { return pz.pdf(z); });
        const double t2 = std::abs(boundary_terms(fpe, g).d_dp);
        if (prev > 0) CHECK(t2 > 1.2 * prev);
        prev = t2;
    }
    CHECK(prev > 10.0);  // already far from zero on the finest grid

    // while the theta-frame term converges to zero
    const StationaryPdf pt = stationary_pdf_theta();
    const Fpe1D fpet = theta_fpe();
    double prev_t = -1;
    for (const int n : {200, 400, 800, 1600}) {
        Pdf1DGrid g = Pdf1DGrid::uniform(0.0, M_PI, n);
        g.fill([&](double t) { return pt.pdf(t); });
        const double t2 = std::abs(boundary_terms(fpet, g).d_dp);
        if (prev_t >= 0) CHECK(t2 < 0.75 * prev_t + 1e-12);
        prev_t = t2;
    }
    CHECK(prev_t < 1e-2);
}

TEST_CASE("trajectory-level system entropy and the ledger identity") {
    const SdeSystem sys = theta_sde();
    const Fpe1D fpe = fpe_from_system(sys);
    const Pdf1DGrid st = fpe.stationary(Pdf1DGrid::uniform(0.0, M_PI, 600));

    // stationary density: snapshots at any times are the same grid
    std::vector<Pdf1DGrid> series = {st, st};
    series[1].time = 1.0;

    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 1000;
    cfg.seed = 12;
    Trajectory traj = run_trajectory(sys, cfg, {1.2});
    attach_entropy(traj, EntropyMethod::closed_theta);
    attach_system_entropy(traj, series);

    REQUIRE(traj.ds_sys.size() == traj.x.size());
    REQUIRE(traj.ds_tot.size() == traj.x.size());
    for (size_t k = 0; k < traj.x.size(); ++k) {
        // ds_sys = ln p(x_0) - ln p(x_k) for a time-independent density
        const double want = std::log(st.value_at(traj.x[0][0])) -
                            std::log(st.value_at(traj.x[k][0]));
        CHECK(traj.ds_sys[k] == doctest::Approx(want).epsilon(1e-10));
        CHECK(traj.ds_tot[k] == traj.ds_env[k] + traj.ds_sys[k]);
    }
}
