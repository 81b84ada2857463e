#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kolmo/field.hpp"

namespace kolmo {

// Radial spectral profiles for the time-independent force, before the
// divergence-free projection. All are supported in |xi| < c/ell0.
struct BallIndicator {
    double amplitude = 1.0;  // ghat = A on 0 < |xi| < c/ell0
};
struct Shell {
    double amplitude = 1.0;  // ghat = A on r1 <= |xi| < r2
    double r1 = 0.0;
    double r2 = 0.0;
};
struct CustomRadial {
    std::vector<std::pair<double, double>> table;  // (|xi|, ghat) samples, increasing |xi|
    double amplitude = 1.0;                        // multiplies the tabulated values
};

using ForceShape = std::variant<BallIndicator, Shell, CustomRadial>;

/// Declarative description of a divergence-free, low-frequency force.
/// The spectrum vanishes for |xi| >= c/ell0; the built field applies a
/// constant pre-projection direction e1 followed by the Leray projection.
struct ForceProfile {
    ForceShape shape;
    double ell0 = 1.0;   // length scale of the effective forcing region
    double c = 1.0;      // dimensionless localization constant
    double alpha = 2.0;  // exponent used for the H^{-alpha/2} norm (2 = classical H^{-1})

    double support_radius() const;
    double radial_amplitude(double s) const;  // pre-projection ghat(|xi| = s)
};

/// Exact continuum norms of the pre-projection radial profile; all quantities
/// are treated in nondimensional units. The projected field's L2 norm carries
/// an extra angular factor sqrt(2/3) for the constant-direction recipe.
struct ForceNorms {
    double l2 = 0.0;
    double h_neg1 = 0.0;
    double h_neg_alpha_half = 0.0;
    double laplacian_l2 = 0.0;
    double grad_linf = 0.0;  // upper bound via (2 pi)^{-3/2} * int |xi| ghat dxi
    double F = 0.0;          // averaged force  l2 / ell0^{3/2}

    static std::string_view unit(std::string_view field);
};

/// Build the Leray-projected lattice force. Throws if the support exceeds the
/// grid's dealias cutoff or holds no nonzero lattice mode.
SpectralVectorField build_force(const ForceProfile& profile, const GridSpec& grid);

ForceNorms continuum_norms(const ForceProfile& profile);

/// Gr = ||f||_{L2} * ell0^{3/2} / nu^2.
double grashof(const ForceNorms& norms, double ell0, double nu);

struct DampingRule {
    enum class Kind { beta_from_force, beta_from_viscosity, explicit_value };
    Kind kind = Kind::beta_from_force;
    double value = 0.0;  // explicit_value only

    static DampingRule from_force() { return {Kind::beta_from_force, 0.0}; }
    static DampingRule from_viscosity() { return {Kind::beta_from_viscosity, 0.0}; }
    static DampingRule explicit_beta(double b) { return {Kind::explicit_value, b}; }
};

/// beta = F^{3/2}, beta = nu/ell0^2, or the explicit value; throws unless > 0.
double damping_beta(const DampingRule& rule, const ForceNorms& norms, double nu, double ell0);

struct ConditionEntry {
    std::string name;
    double ratio = 0.0;
    bool much_greater = false;  // ratio >= K
    bool approx_one = false;    // |ratio - 1| <= 0.05
};

struct ConditionReport {
    std::vector<ConditionEntry> entries;
    double K = 10.0;
    std::string linfty_window;  // where the flat-profile amplitude lands
};

/// Condition margins m1, m2 (with the alpha-case exponent split) evaluated as
/// ratios, plus the L-infinity amplitude window report for flat profiles.
ConditionReport validate_conditions(const ForceProfile& profile, const ForceNorms& norms,
                                    double nu, double alpha, double K = 10.0);

}  // namespace kolmo
