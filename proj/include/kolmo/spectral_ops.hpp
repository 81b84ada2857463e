#pragma once

#include <variant>

#include "kolmo/field.hpp"

namespace kolmo {

// Fourier multipliers applied coefficientwise on the lattice.
struct LerayProjection {};                             // I - k k^T / |k|^2
struct FractionalLaplacian { double alpha; };          // |k|^alpha, requires 0 < alpha < 4
struct Mollifier { double delta; };                    // exp(-delta^2 |k|^2); delta = 0 is identity
struct DealiasTwoThirds {};                            // zero all modes with any 3|m_i| > n
struct HeatFactor { double coefficient; double dt; };  // exp(-coefficient * dt * |k|^2)

using MultiplierKind =
    std::variant<LerayProjection, FractionalLaplacian, Mollifier, DealiasTwoThirds, HeatFactor>;

/// Physical samples -> spectral coefficients under the unitary convention,
/// with the k = 0 mode pinned to zero afterwards (mean-zero enforcement).
SpectralVectorField forward_transform(const PhysicalVectorField& physical);

PhysicalVectorField inverse_transform(const SpectralVectorField& v);

/// Divergence-free projection: u(k) -> (I - k k^T/|k|^2) u(k) for k != 0.
SpectralVectorField leray_project(const SpectralVectorField& v);
void leray_project_in_place(SpectralVectorField& v);

SpectralVectorField apply_multiplier(const MultiplierKind& kind, const SpectralVectorField& v);
void apply_multiplier_in_place(const MultiplierKind& kind, SpectralVectorField& v);

/// Homogeneous Sobolev norm (sum_k |k|^{2s} |v(k)|^2 dVk)^{1/2}. s = 0
/// reproduces the L2 norm; negative s skips the (pinned) k = 0 mode.
double sobolev_norm(const SpectralVectorField& v, double s);

/// L2 pairing <a, b> = Re sum_k a(k) . conj(b(k)) dVk.
double l2_inner_product(const SpectralVectorField& a, const SpectralVectorField& b);

/// Max over grid points of the Frobenius norm of the 3x3 gradient matrix
/// d_j v_i, evaluated pseudo-spectrally.
double max_gradient_norm(const SpectralVectorField& v);

/// Max over grid points of the Euclidean speed |v(x)|.
double max_pointwise_speed(const SpectralVectorField& v);

}  // namespace kolmo
