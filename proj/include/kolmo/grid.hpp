#pragma once

#include <cstddef>
#include <string_view>

namespace kolmo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Periodic box [0,L]^3 sampled with n modes per axis.
///
/// The wavenumber lattice is k = (2*pi/L)*m with integer m in [-n/2, n/2).
/// Coefficients follow the unitary-Plancherel convention: the grid quadrature
/// of the physical L2 norm equals the spectral-cell quadrature of the
/// coefficient L2 norm, so stored coefficients approximate the continuum
/// unitary Fourier transform sampled on the lattice.
class GridSpec {
  public:
    GridSpec(double box_length, int modes_per_axis);

    double L() const { return box_length_; }
    int n() const { return n_; }
    std::size_t site_count() const {
        return static_cast<std::size_t>(n_) * n_ * n_;
    }

    double physical_cell_volume() const;  // (L/n)^3
    double spectral_cell_volume() const;  // (2 pi / L)^3
    double wavenumber_step() const { return kTwoPi / box_length_; }

    /// FFT storage index i in [0,n) -> signed integer mode m in [-n/2, n/2).
    int signed_mode(int i) const { return i < n_ / 2 ? i : i - n_; }

    /// Storage index of the mirror site -m (per axis: i -> (n-i) mod n).
    std::size_t mirror_index(int ix, int iy, int iz) const;

    /// Largest |k| per axis kept by the 2/3-rule mask.
    double dealias_cutoff() const { return wavenumber_step() * n_ / 3.0; }

    /// True if the integer mode survives the 2/3-rule mask (3|m_i| <= n on every axis).
    bool mode_survives_dealias(int mx, int my, int mz) const {
        const int lim = n_;
        return 3 * (mx < 0 ? -mx : mx) <= lim && 3 * (my < 0 ? -my : my) <= lim &&
               3 * (mz < 0 ? -mz : mz) <= lim;
    }

    bool operator==(const GridSpec&) const = default;

    static constexpr std::string_view convention = "unitary-Plancherel";

  private:
    double box_length_;
    int n_;
};

/// Visit every lattice site in storage order: f(idx, mx, my, mz).
template <typename F>
void for_each_mode(const GridSpec& g, F&& f) {
    const int n = g.n();
    std::size_t idx = 0;
    for (int ix = 0; ix < n; ++ix) {
        const int mx = g.signed_mode(ix);
        for (int iy = 0; iy < n; ++iy) {
            const int my = g.signed_mode(iy);
            for (int iz = 0; iz < n; ++iz, ++idx) f(idx, mx, my, g.signed_mode(iz));
        }
    }
}

}  // namespace kolmo
