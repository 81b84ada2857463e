#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "kolmo/spectral_ops.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace kolmo;
using namespace kolmo::testutil;

TEST_CASE("GridSpec validates its invariants") {
    CHECK_THROWS_AS(GridSpec(0.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(-1.0, 16), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(1.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(1.0, 15), std::invalid_argument);
    GridSpec g(2.0, 16);
    CHECK(g.signed_mode(0) == 0);
    CHECK(g.signed_mode(7) == 7);
    CHECK(g.signed_mode(8) == -8);
    CHECK(g.signed_mode(15) == -1);
    CHECK(g.wavenumber_step() == doctest::Approx(kPi));
    CHECK(g.physical_cell_volume() == doctest::Approx(std::pow(2.0 / 16, 3)));
    CHECK(g.spectral_cell_volume() == doctest::Approx(std::pow(kPi, 3)));
}

TEST_CASE("forward/inverse round trip on random mean-zero fields") {
    for (auto [L, n, seed] : {std::tuple{2.0 * kPi, 16, 11u}, {3.7, 8, 12u}, {10.0, 24, 13u}}) {
        GridSpec g(L, n);
        PhysicalVectorField p = random_physical_field(g, seed);
        SpectralVectorField v = forward_transform(p);
        PhysicalVectorField back = inverse_transform(v);
        double worst = 0.0, scale = 0.0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < p.comp[c].size(); ++i) {
                worst = std::max(worst, std::abs(back.comp[c][i] - p.comp[c][i]));
                scale = std::max(scale, std::abs(p.comp[c][i]));
            }
        CHECK(worst <= 1e-12 * scale);
        CHECK(v.hermitian_defect() <= 1e-13 * std::max(v.max_abs_coefficient(), 1.0));
    }
}

TEST_CASE("Plancherel: physical quadrature matches the spectral sum") {
    GridSpec g(5.0, 16);
    PhysicalVectorField p = random_physical_field(g, 21);
    SpectralVectorField v = forward_transform(p);
    const double phys = oracle::physical_l2_norm(p);
    const double spec = sobolev_norm(v, 0.0);
    CHECK(rel_err(spec * spec, phys * phys) <= 1e-10);
}

TEST_CASE("constant field is pinned to zero mean") {
    GridSpec g(2.0, 8);
    PhysicalVectorField p(g);
    for (auto& v : p.comp[0]) v = 3.25;
    SpectralVectorField out = forward_transform(p);
    CHECK(out.max_abs_coefficient() <= 1e-12);
}

TEST_CASE("single plane wave sin(2 pi x/L) e2 -> two conjugate modes") {
    const double L = 4.0;
    const int n = 16;
    GridSpec g(L, n);
    const double a = 0.75;
    const double kappa = kTwoPi / L;
    PhysicalVectorField p(g);
    std::size_t idx = 0;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz, ++idx)
                p.comp[1][idx] = a * std::sin(kappa * (L / n) * ix);
    SpectralVectorField v = forward_transform(p);

    // The exponential amplitude at +kappa is -i a/2; stored coefficients
    // carry the L^3/(2 pi)^{3/2} conversion.
    const Complex expected = Complex(0.0, -0.5 * a) * std::pow(L, 3) / std::pow(kTwoPi, 1.5);
    const std::size_t plus = (1ull * n + 0) * n + 0;
    const std::size_t minus = (static_cast<std::size_t>(n - 1) * n + 0) * n + 0;
    CHECK(std::abs(v.at(1, plus) - expected) <= 1e-12 * std::abs(expected));
    CHECK(std::abs(v.at(1, minus) - std::conj(expected)) <= 1e-12 * std::abs(expected));
    double rest = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!(c == 1 && (i == plus || i == minus)))
                rest = std::max(rest, std::abs(v.at(c, i)));
    CHECK(rest <= 1e-12 * std::abs(expected));
}

TEST_CASE("Leray projection: gradients annihilate, solenoidal fields pass through") {
    GridSpec g(2.0 * kPi, 16);
    const double dk = g.wavenumber_step();

    SUBCASE("pure gradient field maps to zero") {
        SpectralVectorField grad(g);
        std::mt19937_64 rng(5);
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            if (mx == 0 && my == 0 && mz == 0) return;
            const Complex gk(((rng() >> 11) * 0x1.0p-53) - 0.5, ((rng() >> 11) * 0x1.0p-53) - 0.5);
            grad.at(0, idx) = Complex(0, dk * mx) * gk;
            grad.at(1, idx) = Complex(0, dk * my) * gk;
            grad.at(2, idx) = Complex(0, dk * mz) * gk;
        });
        SpectralVectorField out = leray_project(grad);
        CHECK(out.max_abs_coefficient() <= 1e-13 * grad.max_abs_coefficient());
    }

    SUBCASE("hand-evaluated single modes") {
        SpectralVectorField v(g);
        const std::size_t on_axis = (2ull * 16 + 0) * 16 + 0;   // m = (2,0,0)
        const std::size_t off_axis = (0ull * 16 + 2) * 16 + 0;  // m = (0,2,0)
        v.at(0, on_axis) = Complex(1.0, 0.0);
        v.at(0, off_axis) = Complex(1.0, 0.0);
        SpectralVectorField out = leray_project(v);
        CHECK(std::abs(out.at(0, on_axis)) <= 1e-15);  // e1 parallel to k
        CHECK(std::abs(out.at(0, off_axis) - Complex(1.0, 0.0)) <= 1e-15);
        CHECK(std::abs(out.at(1, off_axis)) <= 1e-15);
    }

    SUBCASE("idempotent, self-adjoint, divergence-free") {
        SpectralVectorField v = random_hermitian_field(g, 31, 5);
        SpectralVectorField w = random_hermitian_field(g, 32, 5);
        SpectralVectorField pv = leray_project(v);
        SpectralVectorField ppv = leray_project(pv);
        CHECK(field_rel_err(ppv, pv) <= 1e-13);
        CHECK(pv.divergence_defect() <= 1e-13);
        const double lhs = l2_inner_product(pv, w);
        const double rhs = l2_inner_product(v, leray_project(w));
        CHECK(rel_err(lhs, rhs) <= 1e-13);
    }
}

TEST_CASE("multipliers: symbols, identities, validation") {
    GridSpec g(2.0 * kPi, 12);
    SpectralVectorField v = random_hermitian_field(g, 77, 4);
    const double dk = g.wavenumber_step();

    SUBCASE("fractional alpha = 2 equals the hand-coded |k|^2 multiplier bit for bit") {
        SpectralVectorField got = apply_multiplier(FractionalLaplacian{2.0}, v);
        SpectralVectorField want = v;
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            const double k2 = dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz);
            for (int c = 0; c < 3; ++c) want.at(c, idx) *= k2;
        });
        bool identical = true;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < v.size(); ++i)
                identical = identical && got.at(c, i) == want.at(c, i);
        CHECK(identical);
    }

    SUBCASE("mollifier with delta = 0 is the identity") {
        SpectralVectorField got = apply_multiplier(Mollifier{0.0}, v);
        bool identical = true;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < v.size(); ++i)
                identical = identical && got.at(c, i) == v.at(c, i);
        CHECK(identical);
    }

    SUBCASE("dealiasing keeps a band-limited field intact and kills the rest") {
        SpectralVectorField got = apply_multiplier(DealiasTwoThirds{}, v);
        std::size_t kept = 0, killed = 0;
        bool values_ok = true;
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            const bool survives = g.mode_survives_dealias(mx, my, mz);
            for (int c = 0; c < 3; ++c) {
                if (survives) {
                    values_ok = values_ok && got.at(c, idx) == v.at(c, idx);
                    ++kept;
                } else {
                    values_ok = values_ok && got.at(c, idx) == Complex{};
                    ++killed;
                }
            }
        });
        CHECK(values_ok);
        CHECK(kept == 3u * 9 * 9 * 9);  // |m| <= 4 per axis survives on n = 12
        CHECK(killed == 3u * (12 * 12 * 12 - 9 * 9 * 9));
    }

    SUBCASE("heat factor applies exp(-c dt k^2) per mode") {
        SpectralVectorField got = apply_multiplier(HeatFactor{0.7, 0.3}, v);
        double worst = 0.0;
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            const double k2 = dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz);
            const double s = std::exp(-0.7 * 0.3 * k2);
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(got.at(c, idx) - s * v.at(c, idx)));
        });
        CHECK(worst <= 1e-15);
    }

    SUBCASE("parameter validation") {
        CHECK_THROWS_AS((void)apply_multiplier(FractionalLaplacian{0.0}, v), std::invalid_argument);
        CHECK_THROWS_AS((void)apply_multiplier(FractionalLaplacian{4.0}, v), std::invalid_argument);
        CHECK_THROWS_AS((void)apply_multiplier(FractionalLaplacian{-1.0}, v),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)apply_multiplier(Mollifier{-0.1}, v), std::invalid_argument);
    }
}

TEST_CASE("sobolev_norm: closed forms and the L2 identity") {
    GridSpec g(2.0 * kPi, 16);  // dk = 1

    SUBCASE("zero field") {
        SpectralVectorField z(g);
        for (double s : {-1.5, -1.0, 0.0, 0.5, 1.0, 2.0}) CHECK(sobolev_norm(z, s) == 0.0);
    }

    SUBCASE("single mode at |k| = 2") {
        const double a = 1.3;
        SpectralVectorField v(g);
        v.at(0, (2ull * 16 + 0) * 16 + 0) = Complex(a, 0.0);
        const double dv = std::sqrt(g.spectral_cell_volume());
        CHECK(rel_err(sobolev_norm(v, -1.0), a * dv / 2.0) <= 1e-14);
        CHECK(rel_err(sobolev_norm(v, 0.0), a * dv) <= 1e-14);
        CHECK(rel_err(sobolev_norm(v, 1.0), a * dv * 2.0) <= 1e-14);
        CHECK(rel_err(sobolev_norm(v, 0.75), a * dv * std::pow(2.0, 0.75)) <= 1e-14);
    }

    SUBCASE("s = 0 reproduces the physical L2 norm") {
        GridSpec g2(3.0, 16);
        PhysicalVectorField p = random_physical_field(g2, 99);
        SpectralVectorField v = forward_transform(p);
        CHECK(rel_err(sobolev_norm(v, 0.0), oracle::physical_l2_norm(p)) <= 1e-10);
    }
}

TEST_CASE("max_gradient_norm") {
    SUBCASE("zero field") {
        GridSpec g(1.0, 8);
        CHECK(max_gradient_norm(SpectralVectorField(g)) == 0.0);
    }

    SUBCASE("plane wave a sin(kappa x) e2 has max gradient a kappa") {
        const double L = 4.0;
        const int n = 32;
        GridSpec g(L, n);
        const double a = 0.6;
        const int mode = 3;
        const double kappa = kTwoPi / L * mode;
        PhysicalVectorField p(g);
        std::size_t idx = 0;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz, ++idx)
                    p.comp[1][idx] = a * std::sin(kappa * (L / n) * ix);
        SpectralVectorField v = forward_transform(p);
        // the grid samples the cosine peak only approximately
        const double got = max_gradient_norm(v);
        CHECK(got <= a * kappa * (1.0 + 1e-12));
        CHECK(got >= a * kappa * 0.98);
    }

    SUBCASE("Bernstein-type bound for band-limited fields") {
        // support |k| < R  =>  max|grad| <= (2 pi)^{-3/2} sqrt(4 pi/5) R^{5/2} ||v||_{L2}
        GridSpec g(2.0 * kPi, 24);
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            SpectralVectorField v = random_hermitian_field(g, seed, 4);
            const double R = std::sqrt(3.0) * 4.0 * 1.0001;  // corner of the |m_i| <= 4 cube
            const double c0 = std::pow(kTwoPi, -1.5) * std::sqrt(4.0 * kPi / 5.0);
            CHECK(max_gradient_norm(v) <= c0 * std::pow(R, 2.5) * sobolev_norm(v, 0.0));
        }
    }
}

TEST_CASE("forward_transform rejects dimension mismatch") {
    GridSpec g(1.0, 8);
    PhysicalVectorField p(g);
    p.comp[2].resize(100);
    CHECK_THROWS_AS((void)forward_transform(p), std::invalid_argument);
}
