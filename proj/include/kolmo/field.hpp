#pragma once

#include <array>
#include <complex>
#include <vector>

#include "kolmo/grid.hpp"

namespace kolmo {

using Complex = std::complex<double>;

/// Three-component vector field stored as Fourier coefficients.
///
/// Invariants expected by the rest of the library: Hermitian symmetry
/// coeff(-k) = conj(coeff(k)) (so the physical field is real) and a pinned
/// zero mean coeff(0) = 0.
class SpectralVectorField {
  public:
    explicit SpectralVectorField(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return comp_[0].size(); }

    Complex& at(int c, std::size_t idx) { return comp_[c][idx]; }
    const Complex& at(int c, std::size_t idx) const { return comp_[c][idx]; }
    std::vector<Complex>& component(int c) { return comp_[c]; }
    const std::vector<Complex>& component(int c) const { return comp_[c]; }

    void set_zero();
    void pin_zero_mode();
    void scale(double s);

    double max_abs_coefficient() const;
    bool all_finite() const;

    /// Largest |coeff(-k) - conj(coeff(k))| over all sites and components.
    double hermitian_defect() const;

    /// Largest |k . u(k)| / (|k| max_k|u|): divergence relative to the field scale.
    double divergence_defect() const;

    SpectralVectorField& operator+=(const SpectralVectorField& other);
    SpectralVectorField& operator-=(const SpectralVectorField& other);

  private:
    GridSpec grid_;
    std::array<std::vector<Complex>, 3> comp_;
};

/// Physical-space samples of a real 3-vector field on the same lattice,
/// stored row-major with z fastest.
struct PhysicalVectorField {
    explicit PhysicalVectorField(const GridSpec& g)
        : grid(g), comp{std::vector<double>(g.site_count()), std::vector<double>(g.site_count()),
                        std::vector<double>(g.site_count())} {}

    GridSpec grid;
    std::array<std::vector<double>, 3> comp;
};

}  // namespace kolmo
