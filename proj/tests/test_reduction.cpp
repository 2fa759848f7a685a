#include <doctest.h>

#include <cmath>

#include "qsd/entropy.hpp"
#include "qsd/lindblad.hpp"
#include "qsd/reduction.hpp"
#include "qsd/rng.hpp"

using namespace qsd;

namespace {

VecN random_interior(NormalSampler& rng) {
    for (;;) {
        const VecN r = {1.6 * rng.uniform() - 0.8, 0.15 + 0.7 * rng.uniform(),
                        0.15 + 0.7 * rng.uniform()};
        if (r.norm2() < 0.95) return r;
    }
}

}  // namespace

TEST_CASE("diffusion matrix of the three-coordinate model at the reference point") {
    const SdeSystem sys = build_bloch_sde(raising_lowering_ops());
    const MatNM d = diffusion_matrix(sys, {0.5, 0.5, 0.5});
    const double want[3][3] = {{0.8125, -0.1875, -0.4375},
                               {-0.1875, 0.0625, 0.0625},
                               {-0.4375, 0.0625, 0.3125}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(want[i][j]).epsilon(1e-13));
}

TEST_CASE("scalar diffusion of the one-dimensional models") {
    const SdeSystem z = pure_state_sde(0.0);
    for (const double zv : {0.0, 0.4, -0.8})
        CHECK(diffusion_matrix(z, {zv})(0, 0) ==
              doctest::Approx(1.0 - zv * zv * zv * zv).epsilon(1e-14));

    const SdeSystem th = theta_sde();
    for (const double t : {0.3, M_PI / 2, 2.5}) {
        const double c = std::cos(t);
        CHECK(diffusion_matrix(th, {t})(0, 0) == doctest::Approx(1.0 + c * c).epsilon(1e-14));
    }
}

TEST_CASE("symmetric eigensolver") {
    NormalSampler rng(41);
    for (int k = 0; k < 200; ++k) {
        MatNM s = MatNM::zeros(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = 2 * rng.uniform() - 1;
        const EigenSym eig = eigen_symmetric(s);
        for (int c = 0; c < 3; ++c) {
            const VecN v = eig.vectors.col(c);
            const VecN sv = s * v;
            for (int i = 0; i < 3; ++i) CHECK(std::abs(sv[i] - eig.values[c] * v[i]) < 1e-12);
            CHECK(std::abs(v.norm2() - 1.0) < 1e-12);
        }
        CHECK(eig.values[0] <= eig.values[1]);
        CHECK(eig.values[1] <= eig.values[2]);
    }
}

TEST_CASE("null space of the singular diffusion matrix") {
    const SdeSystem sys = build_bloch_sde(raising_lowering_ops());

    // at (0.5, 0.5, 0.5) the null direction is (1, 2, 1)/sqrt(6)
    const auto basis = null_eigenvectors(diffusion_matrix(sys, {0.5, 0.5, 0.5}));
    REQUIRE(basis.size() == 1);
    const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
    double dot = 0;
    for (int i = 0; i < 3; ++i) dot += basis[0][i] * (i == 1 ? 2.0 : 1.0) * inv_sqrt6;
    CHECK(std::abs(std::abs(dot) - 1.0) < 1e-10);

    // the reduced matrix is full rank
    CHECK(null_eigenvectors(bloch_xz_diffusion_closed(0.5, 0.5)).empty());

    // a zero matrix is all null space
    CHECK(null_eigenvectors(MatNM::zeros(3, 3)).size() == 3);

    // eigenvalues inside [tol, 10 tol] of the spectral scale are ambiguous
    MatNM amb = MatNM::zeros(3, 3);
    amb(0, 0) = 1.0;
    amb(1, 1) = 5e-10;
    amb(2, 2) = 0.0;
    CHECK_THROWS_AS(null_eigenvectors(amb, 1e-10), AmbiguousRankError);
}

TEST_CASE("diffusion matrix is positive semidefinite, null vector annihilated") {
    const SdeSystem sys = build_bloch_sde(raising_lowering_ops());
    NormalSampler rng(42);
    for (int k = 0; k < 1000; ++k) {
        VecN r = random_interior(rng);
        if (rng.uniform() < 0.5) r[1] = -r[1];
        if (rng.uniform() < 0.5) r[2] = -r[2];
        const MatNM d = diffusion_matrix(sys, r);
        CHECK(eigen_symmetric(d).values[0] > -1e-10);

        VecN alpha = {r[0] / r[2], (1.0 - r[0] * r[0] - r[2] * r[2]) / (r[1] * r[2]), 1.0};
        const double s = std::sqrt(alpha.norm2());
        for (int i = 0; i < 3; ++i) alpha[i] /= s;
        const VecN da = d * alpha;
        for (int i = 0; i < 3; ++i) CHECK(std::abs(da[i]) < 1e-8);
    }
}

TEST_CASE("reduction to the (x, z) plane") {
    const Reduced red = reduce_bloch_xz(2.0);

    // closed-form reduced diffusion matrix and its determinant
    NormalSampler rng(43);
    for (int k = 0; k < 300; ++k) {
        double x, z;
        do {
            x = 1.8 * rng.uniform() - 0.9;
            z = 1.8 * rng.uniform() - 0.9;
        } while (x * x + z * z > 0.9);
        const MatNM dr = diffusion_matrix(red.system, {x, z});
        const MatNM dc = bloch_xz_diffusion_closed(x, z);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(dr(i, j) - dc(i, j)) < 1e-10);
    }

    const MatNM d55 = diffusion_matrix(red.system, {0.5, 0.5});
    CHECK(d55(0, 0) == doctest::Approx(0.8125).epsilon(1e-13));
    CHECK(d55(0, 1) == doctest::Approx(-0.4375).epsilon(1e-13));
    CHECK(d55(1, 1) == doctest::Approx(0.3125).epsilon(1e-13));
    double det = 0;
    invert(d55, det);
    CHECK(std::abs(det - 0.0625) < 1e-12);

    const VecN a = red.system.drift({0.5, 0.5});
    CHECK(a[0] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(a[1] == doctest::Approx(-1.0).epsilon(1e-13));

    CHECK(red.map.dynamical == std::vector<int>{0, 2});
    CHECK(red.map.spectators == std::vector<int>{1});
    const VecN full = red.map.full_point({0.5, 0.5});
    CHECK(full[1] == doctest::Approx(0.5).epsilon(1e-13));  // y = sqrt(0.5/2)
}

TEST_CASE("identity reduction when M = N") {
    const Reduced red = reduce(pure_state_sde(0.0), {}, nullptr);
    CHECK(red.map.identity);
    CHECK(red.map.spectators.empty());
    CHECK(red.system.dim == 1);
    CHECK(red.system.drift({0.5})[0] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("reduction argument checks") {
    const SdeSystem full = build_bloch_sde(raising_lowering_ops());
    CHECK_THROWS_AS(reduce(full, {0, 1}, nullptr), std::invalid_argument);

    // on the pure circle the diffusion matrix drops to rank one and the
    // spectator block degenerates
    const Reduced red = reduce_bloch_xz(2.0);
    CHECK_THROWS_AS(red.map.r_block({0.6, 0.8}), SingularReductionError);
}

TEST_CASE("P, Q, R blocks follow the null eigenvector") {
    const Reduced red = reduce_bloch_xz(2.0);
    NormalSampler rng(44);
    for (int k = 0; k < 50; ++k) {
        double x, z;
        do {
            x = 1.4 * rng.uniform() - 0.7;
            z = 0.2 + 0.6 * rng.uniform();
        } while (x * x + z * z > 0.8);

        const MatNM p = red.map.p_block({x, z});
        const MatNM q = red.map.q_block({x, z});
        const MatNM r = red.map.r_block({x, z});
        REQUIRE(p.rows == 1);
        REQUIRE(q.cols == 2);

        // R = -P^{-1} Q, and against the analytic alpha = (x/z, f0 y / z, 1)
        CHECK(r(0, 0) == doctest::Approx(-q(0, 0) / p(0, 0)).epsilon(1e-10));
        CHECK(r(0, 1) == doctest::Approx(-q(0, 1) / p(0, 0)).epsilon(1e-10));

        const double y = red.map.full_point({x, z})[1];
        const double ratio0 = (x / z) / (2.0 * y / z);  // q0/p for the analytic vector
        const double ratio1 = 1.0 / (2.0 * y / z);
        CHECK(r(0, 0) == doctest::Approx(-ratio0).epsilon(1e-8));
        CHECK(r(0, 1) == doctest::Approx(-ratio1).epsilon(1e-8));
    }
}

TEST_CASE("modified derivatives reduce to plain ones for spectator-free fields") {
    const Reduced red = reduce_bloch_xz(2.0);
    const SdeSystem full = build_bloch_sde(raising_lowering_ops());
    const auto& closures = bloch_xz_entropy_closures();

    auto noise_rows = red.map.noise_dyn_rows;
    NormalSampler rng(45);
    for (int k = 0; k < 40; ++k) {
        double x, z;
        do {
            x = 1.2 * rng.uniform() - 0.6;
            z = 0.2 + 0.5 * rng.uniform();
        } while (x * x + z * z > 0.7);

        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int m = 0; m < 2; ++m) {
                    auto field = [&](const VecN& fullpt) {
                        const MatNM b = noise_rows(fullpt);
                        double s = 0;
                        for (int c = 0; c < 2; ++c) s += b(i, c) * b(j, c);
                        return 0.5 * s;
                    };
                    const double got = modified_derivative(red.map, field, {x, z}, m);
                    const double want = closures.dD({x, z}, m)(i, j);
                    CHECK(std::abs(got - want) < 1e-6);
                }
    }
    (void)full;
}

TEST_CASE("Ito residuals identify constants of the motion") {
    const SdeSystem sys = build_bloch_sde(raising_lowering_ops());

    // the conserved quantity has vanishing residuals
    auto f = [](const VecN& r) { return (1.0 - r[0] * r[0] - r[2] * r[2]) / (r[1] * r[1]); };
    const ConstantResidual good = verify_constant(sys, f, {0.5, 0.5, 0.5}, 1e-5);
    CHECK(good.max_abs() < 1e-6);

    // z is visibly not conserved
    const ConstantResidual bad =
        verify_constant(sys, [](const VecN& r) { return r[2]; }, {0.5, 0.5, 0.5}, 1e-5);
    CHECK(bad.drift == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(bad.noise[0]) > 0.1);
    CHECK(std::abs(bad.noise[1]) > 0.1);

    // |r|^2 is conserved on the pure circle
    const Reduced red = reduce_bloch_xz(2.0);
    auto norm2 = [](const VecN& p) { return p[0] * p[0] + p[1] * p[1]; };
    for (const double z : {-0.6, 0.1, 0.7}) {
        const double x = std::sqrt(1.0 - z * z);
        const ConstantResidual circle = verify_constant(red.system, norm2, {x, z}, 1e-5);
        CHECK(circle.max_abs() < 1e-6);
    }
}
