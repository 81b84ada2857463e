#include <doctest.h>

#include <cmath>

#include "kolmo/diagnostics.hpp"
#include "kolmo/solver.hpp"
#include "kolmo/spectral_ops.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace kolmo;
using namespace kolmo::testutil;

namespace {

SimConfig basic_config(const GridSpec& g, double beta) {
    SimConfig cfg{g};
    cfg.nu = 1.0;
    cfg.alpha = 2.0;
    cfg.beta = beta;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("transport_term is zero on trivial inputs") {
    GridSpec g(2.0 * kPi, 16);
    SUBCASE("zero field") {
        const SpectralVectorField out = transport_term(SpectralVectorField(g), 0.0);
        CHECK(out.max_abs_coefficient() == 0.0);
    }
    SUBCASE("single plane wave advects nothing") {
        // u =
        // a sin(k x1) e2: (u . grad) u = 0 identically
        PhysicalVectorField p(g);
        const int n = g.n();
        std::size_t idx = 0;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz, ++idx)
                    p.comp[1][idx] = 0.8 * std::sin((kTwoPi / g.L()) * (g.L() / n) * ix);
        const SpectralVectorField u = forward_transform(p);
        const SpectralVectorField out = transport_term(u, 0.0);
        CHECK(out.max_abs_coefficient() <= 1e-14 * u.max_abs_coefficient());
    }
}

TEST_CASE("transport_term matches the brute-force convolution oracle") {
    GridSpec g(2.0 * kPi, 8);
    SUBCASE("two-mode crossed-shear field with a non-gradient nonlinearity") {
        // u = a sin(x) e2 + b sin(y) e3: (u . grad) u = a b sin(x) cos(y) e3,
        // which is orthogonal to k = (1, +-1, 0) and so survives projection.
        const int n = g.n();
        PhysicalVectorField p(g);
        std::size_t idx = 0;
        const double h = g.L() / n;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz, ++idx) {
                    p.comp[1][idx] = 0.9 * std::sin(h * ix);
                    p.comp[2][idx] = 0.7 * std::sin(h * iy);
                }
        const SpectralVectorField u = forward_transform(p);
        CHECK(u.hermitian_defect() <= 1e-13);
        CHECK(u.divergence_defect() <= 1e-13);

        const SpectralVectorField got = transport_term(u, 0.0);
        const SpectralVectorField want = oracle::transport_convolution(u);
        CHECK(field_rel_err(got, want, sobolev_norm(u, 0.0)) <= 1e-12);
        CHECK(sobolev_norm(want, 0.0) > 0.1);  // the oracle output is nontrivial
    }
    SUBCASE("random dealiased solenoidal fields") {
        for (std::uint64_t seed : {101u, 102u, 103u}) {
            const SpectralVectorField u = random_solenoidal_field(g, seed);
            const SpectralVectorField got = transport_term(u, 0.0);
            const SpectralVectorField want = oracle::transport_convolution(u);
            CHECK(field_rel_err(got, want, sobolev_norm(u, 0.0)) <= 1e-12);
        }
    }
}

TEST_CASE("transport is energy-neutral against its own field") {
    GridSpec g(2.0 * kPi, 32);
    for (std::uint64_t seed : {7u, 8u, 9u, 10u}) {
        const SpectralVectorField u = random_solenoidal_field(g, seed);
        for (double delta : {0.0, 0.3}) {
            const SpectralVectorField nl = transport_term(u, delta);
            const double pairing = std::abs(l2_inner_product(nl, u));
            CHECK(pairing <= 1e-10 * sobolev_norm(u, 0.0) * sobolev_norm(u, 1.0));
        }
    }
}

TEST_CASE("one linear integrating-factor step is the exact per-mode solution") {
    GridSpec g(2.0 * kPi, 12);
    ForceProfile fp{BallIndicator{2.0}, 1.0, 2.5, 2.0};
    const SpectralVectorField f = build_force(fp, g);

    for (auto [alpha, eps] : {std::pair{2.0, 0.0}, {1.3, 0.0}, {2.0, 0.02}}) {
        SimConfig cfg = basic_config(g, 0.7);
        cfg.alpha = alpha;
        cfg.epsilon = eps;
        cfg.transport_enabled = false;
        cfg.dt = 0.05;
        SolverState s0{0.0, SpectralVectorField(g), 0};
        const SolverState s1 = step_imex(s0, cfg, f);

        double worst = 0.0;
        const double dk = g.wavenumber_step();
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            const double k2 = dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz);
            const double lambda =
                cfg.nu * (k2 == 0.0 ? 0.0 : std::pow(k2, alpha / 2.0)) + cfg.beta + eps * k2 * k2;
            const double phi = -std::expm1(-lambda * cfg.dt) / lambda;
            for (int c = 0; c < 3; ++c) {
                const Complex want = (mx | my | mz) == 0 ? Complex{} : phi * f.at(c, idx);
                worst = std::max(worst, std::abs(s1.u.at(c, idx) - want));
            }
        });
        CHECK(worst <= 1e-15 * f.max_abs_coefficient());
    }
}

TEST_CASE("decay without force stays under the exponential envelope") {
    GridSpec g(2.0 * kPi, 16);
    const double beta = 0.9;
    SimConfig cfg = basic_config(g, beta);
    cfg.transport_enabled = false;
    cfg.dt = 0.05;
    const SpectralVectorField zero_force(g);
    SpectralVectorField u0 = random_solenoidal_field(g, 40);
    const double n0 = sobolev_norm(u0, 0.0);
    Stepper stepper(cfg, zero_force);
    SolverState s{0.0, std::move(u0), 0};
    for (int i = 0; i < 40; ++i) {
        s = stepper.step(s);
        CHECK(sobolev_norm(s.u, 0.0) <= n0 * std::exp(-beta * s.t) * (1.0 + 1e-12));
    }
    SUBCASE("zero field stays zero") {
        SolverState z{0.0, SpectralVectorField(g), 0};
        z = stepper.step(z);
        CHECK(sobolev_norm(z.u, 0.0) == 0.0);
    }
}

TEST_CASE("stokes_exact properties") {
    GridSpec g(2.0 * kPi, 12);
    ForceProfile fp{BallIndicator{1.1}, 1.0, 2.5, 2.0};
    const SpectralVectorField f = build_force(fp, g);
    const SpectralVectorField u0 = random_solenoidal_field(g, 55);
    const double nu = 0.8, beta = 2.0;

    SUBCASE("t = 0 returns the initial data") {
        const SpectralVectorField got = stokes_exact(u0, f, nu, beta, 0.0);
        CHECK(field_rel_err(got, u0) <= 1e-15);
    }
    SUBCASE("large t reaches the per-mode steady state") {
        const SpectralVectorField got = stokes_exact(u0, f, nu, beta, 1e3 / beta);
        double worst = 0.0;
        const double dk = g.wavenumber_step();
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            if ((mx | my | mz) == 0) return;
            const double lambda =
                nu * dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz) + beta;
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(got.at(c, idx) - f.at(c, idx) / lambda));
        });
        CHECK(worst <= 1e-14 * f.max_abs_coefficient());
    }
    SUBCASE("single-mode L2 norm closed form") {
        SpectralVectorField single(g);
        const double a = 0.37;
        single.at(1, (3ull * 12 + 0) * 12 + 0) = Complex(a, 0.0);  // |k| = 3
        const double t = 0.21;
        const double lambda = nu * 9.0 + beta;
        const SpectralVectorField got =
            stokes_exact(SpectralVectorField(g), single, nu, beta, t);
        const double want =
            a * (-std::expm1(-lambda * t)) / lambda * std::sqrt(g.spectral_cell_volume());
        CHECK(rel_err(sobolev_norm(got, 0.0), want) <= 1e-14);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS((void)stokes_exact(u0, f, 0.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS((void)stokes_exact(u0, f, 1.0, 0.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("integrating factor reproduces the exact Stokes propagator over many steps") {
    GridSpec g(2.0 * kPi, 16);
    ForceProfile fp{BallIndicator{1.3}, 1.0, 2.5, 2.0};
    const SpectralVectorField f = build_force(fp, g);
    SimConfig cfg = basic_config(g, 1.7);
    cfg.nu = 0.6;
    cfg.transport_enabled = false;
    cfg.dt = 5e-3;
    Stepper stepper(cfg, f);
    SolverState s{0.0, random_solenoidal_field(g, 60), 0};
    const SpectralVectorField u0 = s.u;
    for (int i = 0; i < 200; ++i) s = stepper.step(s);
    const SpectralVectorField want = stokes_exact(u0, f, cfg.nu, cfg.beta, s.t);
    CHECK(field_rel_err(s.u, want) <= 1e-12);
}

TEST_CASE("gronwall_ceiling closed forms") {
    CHECK(gronwall_ceiling(2.0, 3.0, 0.5, 4.0, 0.0) ==
          doctest::Approx(4.0 + 9.0 / 2.0).epsilon(1e-15));
    CHECK(gronwall_ceiling(0.0, 3.0, 0.5, 4.0, 123.0) == doctest::Approx(4.5).epsilon(1e-15));
    // small-Grashof fixture values: ||f||_{H^-1}^2/(nu beta) = 64 pi/(sqrt 2 * F^{3/2})
    const double beta = 8.2815466097028565;
    CHECK(gronwall_ceiling(0.0, 14.179630807244128, std::sqrt(2.0), beta, 1.0) ==
          doctest::Approx(17.167355413359062).epsilon(1e-12));
    CHECK_THROWS_AS((void)gronwall_ceiling(1.0, 1.0, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("mollified trajectories converge to the unmollified one") {
    GridSpec g(2.0 * kPi, 16);
    ForceProfile fp{BallIndicator{1.5}, 1.0, 2.5, 2.0};
    const SpectralVectorField f = build_force(fp, g);
    auto run_with_delta = [&](double delta) {
        SimConfig cfg = basic_config(g, 1.0);
        cfg.delta = delta;
        cfg.dt = 0.02;
        Stepper stepper(cfg, f);
        SolverState s{0.0, make_initial_condition(RandomLowpass{77, 2.0, 3.0}, g), 0};
        for (int i = 0; i < 20; ++i) s = stepper.step(s);
        return s.u;
    };
    const SpectralVectorField base = run_with_delta(0.0);
    const double d_half = field_rel_err(run_with_delta(0.25), base);
    const double d_full = field_rel_err(run_with_delta(0.5), base);
    CHECK(d_full > d_half);
    CHECK(d_half > 0.0);
}

TEST_CASE("trajectories are continuous in alpha at alpha = 2") {
    GridSpec g(2.0 * kPi, 16);
    ForceProfile fp{BallIndicator{1.0}, 1.0, 2.5, 2.0};
    auto run_with_alpha = [&](double alpha) {
        ForceProfile p = fp;
        p.alpha = alpha;
        const SpectralVectorField f = build_force(p, g);
        SimConfig cfg = basic_config(g, 1.0);
        cfg.alpha = alpha;
        cfg.dt = 0.02;
        cfg.t_end = 1.0;
        Stepper stepper(cfg, f);
        SolverState s{0.0, make_initial_condition(RandomLowpass{31, 1.0, 3.0}, g), 0};
        for (int i = 0; i < 50; ++i) s = stepper.step(s);
        return s.u;
    };
    const SpectralVectorField base = run_with_alpha(2.0);
    CHECK(field_rel_err(run_with_alpha(2.0 + 1e-6), base) <= 1e-4);
    CHECK(field_rel_err(run_with_alpha(2.0 - 1e-6), base) <= 1e-4);
}

TEST_CASE("solver state invariants hold along a transport run") {
    GridSpec g(2.0 * kPi, 16);
    ForceProfile fp{BallIndicator{1.5}, 1.0, 2.5, 2.0};
    const SpectralVectorField f = build_force(fp, g);
    SimConfig cfg = basic_config(g, 1.0);
    cfg.dt = 0.02;
    cfg.invariant_check_every = 5;  // exercise the internal assert path too
    Stepper stepper(cfg, f);
    SolverState s{0.0, make_initial_condition(RandomLowpass{3, 1.5, 3.0}, g), 0};
    for (int i = 0; i < 30; ++i) {
        s = stepper.step(s);
        if (i % 10 == 0) {
            CHECK(s.u.hermitian_defect() <= 1e-12 * std::max(1.0, s.u.max_abs_coefficient()));
            CHECK(s.u.divergence_defect() <= 1e-12);
        }
    }
}

TEST_CASE("blow-up guard trips on an unstable configuration") {
    // Far-beyond-CFL time step on an energetic field: RK2 transport diverges
    // and the guard must abort before (or as) the state degenerates.
    GridSpec g(2.0 * kPi, 16);
    ForceProfile fp{BallIndicator{1e-4}, 1.0, 2.5, 2.0};
    const SpectralVectorField f = build_force(fp, g);
    SimConfig cfg = basic_config(g, 1e-4);
    cfg.nu = 1e-5;
    cfg.dt = 5.0;
    cfg.invariant_check_every = 0;
    Stepper stepper(cfg, f);
    SolverState s{0.0, make_initial_condition(RandomLowpass{13, 50.0, 4.0}, g), 0};
    bool aborted = false;
    try {
        for (int i = 0; i < 200; ++i) s = stepper.step(s);
    } catch (const BlowupError&) {
        aborted = true;
    } catch (const NonFiniteError&) {
        aborted = true;  // overflow can reach NaN within one giant step
    }
    CHECK(aborted);
}

TEST_CASE("make_initial_condition") {
    GridSpec g(2.0 * kPi, 16);
    SUBCASE("zero") {
        const SpectralVectorField u = make_initial_condition(ZeroInitial{}, g);
        CHECK(sobolev_norm(u, 0.0) == 0.0);
    }
    SUBCASE("random lowpass: energy, support, solenoidality, determinism") {
        const RandomLowpass ic{123, 2.5, 3.0};
        const SpectralVectorField u = make_initial_condition(ic, g);
        CHECK(rel_err(std::pow(sobolev_norm(u, 0.0), 2), 2.5) <= 1e-12);
        CHECK(u.divergence_defect() <= 1e-13);
        CHECK(u.hermitian_defect() <= 1e-13 * u.max_abs_coefficient());
        const double dk = g.wavenumber_step();
        bool support_ok = true;
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            double mag = 0.0;
            for (int c = 0; c < 3; ++c) mag += std::abs(u.at(c, idx));
            if (mag == 0.0) return;
            const double k2 = dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz);
            support_ok = support_ok && k2 < 9.0 * (1.0 + 1e-12);
        });
        CHECK(support_ok);

        const SpectralVectorField again = make_initial_condition(ic, g);
        bool identical = true;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < u.size(); ++i)
                identical = identical && u.at(c, i) == again.at(c, i);
        CHECK(identical);

        const SpectralVectorField other = make_initial_condition(RandomLowpass{124, 2.5, 3.0}, g);
        CHECK(field_rel_err(other, u) > 0.1);
    }
    SUBCASE("explicit fields are projected and dealiased") {
        SpectralVectorField raw = random_hermitian_field(g, 9, 7);  // 7 > n/3: has junk
        const SpectralVectorField u = make_initial_condition(raw, g);
        CHECK(u.divergence_defect() <= 1e-13);
        bool dealiased = true;
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            if (g.mode_survives_dealias(mx, my, mz)) return;
            for (int c = 0; c < 3; ++c) dealiased = dealiased && u.at(c, idx) == Complex{};
        });
        CHECK(dealiased);
    }
    SUBCASE("cutoff above the dealias limit is rejected") {
        CHECK_THROWS_AS((void)make_initial_condition(RandomLowpass{1, 1.0, 100.0}, g),
                        std::invalid_argument);
    }
}

TEST_CASE("SimConfig validation") {
    GridSpec g(1.0, 8);
    SimConfig cfg = basic_config(g, 1.0);
    validate(cfg);
    SimConfig bad = cfg;
    bad.beta = -1.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.alpha = 4.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.burn_in = 2.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
