#include "kolmo/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kolmo/fft.hpp"

namespace kolmo {

namespace {

// coeff = (2 pi)^{-3/2} * (L/n)^3 * DFT(samples): the discrete stand-in for
// the unitary continuum transform; sums over modes then carry the spectral
// cell volume (2 pi / L)^3.
double forward_scale(const GridSpec& g) {
    const double h3 = g.physical_cell_volume();
    return h3 / std::pow(kTwoPi, 1.5);
}

double inverse_scale(const GridSpec& g) {
    const double L3 = g.L() * g.L() * g.L();
    return std::pow(kTwoPi, 1.5) / L3;
}

}  // namespace

SpectralVectorField forward_transform(const PhysicalVectorField& physical) {
    const GridSpec& g = physical.grid;
    SpectralVectorField out(g);
    const double scale = forward_scale(g);
    for (int c = 0; c < 3; ++c) {
        auto& coeffs = out.component(c);
        const auto& samples = physical.comp[c];
        if (samples.size() != g.site_count())
            throw std::invalid_argument("forward_transform: component " + std::to_string(c) +
                                        " has " + std::to_string(samples.size()) +
                                        " samples, grid expects " +
                                        std::to_string(g.site_count()));
        for (std::size_t i = 0; i < samples.size(); ++i) coeffs[i] = Complex(samples[i], 0.0);
        detail::fft3_forward(g.n(), coeffs.data());
        for (auto& z : coeffs) z *= scale;
    }
    out.pin_zero_mode();
    return out;
}

PhysicalVectorField inverse_transform(const SpectralVectorField& v) {
    const GridSpec& g = v.grid();
    PhysicalVectorField out(g);
    const double scale = inverse_scale(g);
    std::vector<Complex> scratch(g.site_count());
    for (int c = 0; c < 3; ++c) {
        scratch = v.component(c);
        detail::fft3_backward(g.n(), scratch.data());
        auto& samples = out.comp[c];
        for (std::size_t i = 0; i < scratch.size(); ++i) samples[i] = scratch[i].real() * scale;
    }
    return out;
}

void leray_project_in_place(SpectralVectorField& v) {
    const GridSpec& g = v.grid();
    const double dk = g.wavenumber_step();
    auto& c0 = v.component(0);
    auto& c1 = v.component(1);
    auto& c2 = v.component(2);
    for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
        if (mx == 0 && my == 0 && mz == 0) {
            c0[idx] = c1[idx] = c2[idx] = Complex{};
            return;
        }
        const double kx = dk * mx, ky = dk * my, kz = dk * mz;
        const double k2 = kx * kx + ky * ky + kz * kz;
        const Complex dot = (kx * c0[idx] + ky * c1[idx] + kz * c2[idx]) / k2;
        c0[idx] -= kx * dot;
        c1[idx] -= ky * dot;
        c2[idx] -= kz * dot;
    });
}

SpectralVectorField leray_project(const SpectralVectorField& v) {
    SpectralVectorField out = v;
    leray_project_in_place(out);
    return out;
}

namespace {

template <typename SymbolFn>
void scale_by_symbol(SpectralVectorField& v, SymbolFn&& symbol) {
    const GridSpec& g = v.grid();
    const double dk = g.wavenumber_step();
    auto& c0 = v.component(0);
    auto& c1 = v.component(1);
    auto& c2 = v.component(2);
    for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
        const double kx = dk * mx, ky = dk * my, kz = dk * mz;
        const double s = symbol(kx * kx + ky * ky + kz * kz);
        c0[idx] *= s;
        c1[idx] *= s;
        c2[idx] *= s;
    });
}

}  // namespace

void apply_multiplier_in_place(const MultiplierKind& kind, SpectralVectorField& v) {
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LerayProjection>) {
                leray_project_in_place(v);
            } else if constexpr (std::is_same_v<T, FractionalLaplacian>) {
                if (!(m.alpha > 0.0 && m.alpha < 4.0))
                    throw std::invalid_argument(
                        "FractionalLaplacian: alpha must lie in (0, 4), got " +
                        std::to_string(m.alpha));
                const double half = m.alpha / 2.0;
                scale_by_symbol(v, [half](double k2) { return k2 == 0.0 ? 0.0 : std::pow(k2, half); });
            } else if constexpr (std::is_same_v<T, Mollifier>) {
                if (m.delta < 0.0)
                    throw std::invalid_argument("Mollifier: delta must be non-negative, got " +
                                                std::to_string(m.delta));
                const double d2 = m.delta * m.delta;
                scale_by_symbol(v, [d2](double k2) { return std::exp(-d2 * k2); });
            } else if constexpr (std::is_same_v<T, DealiasTwoThirds>) {
                const GridSpec& g = v.grid();
                const int n = g.n();
                auto& c0 = v.component(0);
                auto& c1 = v.component(1);
                auto& c2 = v.component(2);
                for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
                    if (3 * std::abs(mx) > n || 3 * std::abs(my) > n || 3 * std::abs(mz) > n) {
                        c0[idx] = c1[idx] = c2[idx] = Complex{};
                    }
                });
            } else if constexpr (std::is_same_v<T, HeatFactor>) {
                if (m.coefficient < 0.0 || m.dt < 0.0)
                    throw std::invalid_argument("HeatFactor: coefficient and dt must be non-negative");
                const double cdt = m.coefficient * m.dt;
                scale_by_symbol(v, [cdt](double k2) { return std::exp(-cdt * k2); });
            }
        },
        kind);
}

SpectralVectorField apply_multiplier(const MultiplierKind& kind, const SpectralVectorField& v) {
    SpectralVectorField out = v;
    apply_multiplier_in_place(kind, out);
    return out;
}

double sobolev_norm(const SpectralVectorField& v, double s) {
    const GridSpec& g = v.grid();
    const double dk = g.wavenumber_step();
    const double dVk = g.spectral_cell_volume();
    const auto& c0 = v.component(0);
    const auto& c1 = v.component(1);
    const auto& c2 = v.component(2);
    double sum = 0.0;
    for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
        double w = 1.0;
        if (s != 0.0) {
            if (mx == 0 && my == 0 && mz == 0) return;  // pinned mode; avoids 0^s for s < 0
            const double kx = dk * mx, ky = dk * my, kz = dk * mz;
            w = std::pow(kx * kx + ky * ky + kz * kz, s);
        }
        sum += w * (std::norm(c0[idx]) + std::norm(c1[idx]) + std::norm(c2[idx]));
    });
    return std::sqrt(sum * dVk);
}

double l2_inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("l2_inner_product: grid mismatch");
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& ca = a.component(c);
        const auto& cb = b.component(c);
        for (std::size_t i = 0; i < ca.size(); ++i)
            sum += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
    }
    return sum * a.grid().spectral_cell_volume();
}

double max_gradient_norm(const SpectralVectorField& v) {
    const GridSpec& g = v.grid();
    const double dk = g.wavenumber_step();
    const double scale = inverse_scale(g);
    std::vector<double> frob_sq(g.site_count(), 0.0);
    std::vector<Complex> scratch(g.site_count());
    for (int c = 0; c < 3; ++c) {
        for (int axis = 0; axis < 3; ++axis) {
            const auto& coeffs = v.component(c);
            for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
                const int m = axis == 0 ? mx : (axis == 1 ? my : mz);
                scratch[idx] = Complex(0.0, dk * m) * coeffs[idx];
            });
            detail::fft3_backward(g.n(), scratch.data());
            for (std::size_t i = 0; i < scratch.size(); ++i) {
                const double d = scratch[i].real() * scale;
                frob_sq[i] += d * d;
            }
        }
    }
    double worst = 0.0;
    for (double f : frob_sq) worst = std::max(worst, f);
    return std::sqrt(worst);
}

double max_pointwise_speed(const SpectralVectorField& v) {
    const PhysicalVectorField phys = inverse_transform(v);
    double worst = 0.0;
    for (std::size_t i = 0; i < phys.comp[0].size(); ++i) {
        const double s2 = phys.comp[0][i] * phys.comp[0][i] + phys.comp[1][i] * phys.comp[1][i] +
                          phys.comp[2][i] * phys.comp[2][i];
        worst = std::max(worst, s2);
    }
    return std::sqrt(worst);
}

}  // namespace kolmo
