#include "kolmo/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kolmo {

SpectralVectorField::SpectralVectorField(const GridSpec& grid)
    : grid_(grid), comp_{std::vector<Complex>(grid.site_count()),
                         std::vector<Complex>(grid.site_count()),
                         std::vector<Complex>(grid.site_count())} {}

void SpectralVectorField::set_zero() {
    for (auto& c : comp_) std::fill(c.begin(), c.end(), Complex{});
}

void SpectralVectorField::pin_zero_mode() {
    for (auto& c : comp_) c[0] = Complex{};
}

void SpectralVectorField::scale(double s) {
    for (auto& c : comp_)
        for (auto& z : c) z *= s;
}

double SpectralVectorField::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& c : comp_)
        for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
}

bool SpectralVectorField::all_finite() const {
    for (const auto& c : comp_)
        for (const auto& z : c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double SpectralVectorField::hermitian_defect() const {
    const int n = grid_.n();
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::size_t idx = 0;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz, ++idx) {
                    const std::size_t mir = grid_.mirror_index(ix, iy, iz);
                    worst = std::max(worst, std::abs(comp_[c][mir] - std::conj(comp_[c][idx])));
                }
    }
    return worst;
}

double SpectralVectorField::divergence_defect() const {
    // Normalized by the field's largest coefficient so modes the projection
    // annihilated exactly (up to round-off) do not dominate the ratio.
    const double scale = max_abs_coefficient();
    if (scale == 0.0) return 0.0;
    const double dk = grid_.wavenumber_step();
    double worst = 0.0;
    for_each_mode(grid_, [&](std::size_t idx, int mx, int my, int mz) {
        if (mx == 0 && my == 0 && mz == 0) return;
        const double kx = dk * mx, ky = dk * my, kz = dk * mz;
        const Complex dot = kx * comp_[0][idx] + ky * comp_[1][idx] + kz * comp_[2][idx];
        const double kmag = std::sqrt(kx * kx + ky * ky + kz * kz);
        worst = std::max(worst, std::abs(dot) / (kmag * scale));
    });
    return worst;
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
    if (!(grid_ == other.grid_))
        throw std::invalid_argument("SpectralVectorField: grid mismatch in +=");
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] += other.comp_[c][i];
    return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
    if (!(grid_ == other.grid_))
        throw std::invalid_argument("SpectralVectorField: grid mismatch in -=");
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] -= other.comp_[c][i];
    return *this;
}

}  // namespace kolmo
