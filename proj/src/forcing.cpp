#include "kolmo/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "kolmo/spectral_ops.hpp"

namespace kolmo {

namespace {

constexpr double kQuadratureTol = 1e-10;

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

/// 4 pi int_{r1}^{r2} s^{2-2s_exp} ds for a flat profile of unit amplitude.
double flat_weighted_square(double r1, double r2, double sobolev_s) {
    const double p = 3.0 - 2.0 * sobolev_s;
    if (std::abs(p) < 1e-14) {
        if (r1 <= 0.0) throw std::invalid_argument("force norm: non-integrable weight at s = 3/2");
        return 4.0 * kPi * std::log(r2 / r1);
    }
    if (p < 0.0 && r1 <= 0.0)
        throw std::invalid_argument("force norm: non-integrable weight (s >= 3/2 on a ball)");
    return 4.0 * kPi * (std::pow(r2, p) - (r1 > 0.0 ? std::pow(r1, p) : 0.0)) / p;
}

}  // namespace

double ForceProfile::support_radius() const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BallIndicator>) {
                return c / ell0;
            } else if constexpr (std::is_same_v<T, Shell>) {
                return s.r2;
            } else {
                return s.table.empty() ? 0.0 : s.table.back().first;
            }
        },
        shape);
}

double ForceProfile::radial_amplitude(double s_abs) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BallIndicator>) {
                return (s_abs > 0.0 && s_abs < c / ell0) ? s.amplitude : 0.0;
            } else if constexpr (std::is_same_v<T, Shell>) {
                return (s_abs >= s.r1 && s_abs < s.r2) ? s.amplitude : 0.0;
            } else {
                const auto& tab = s.table;
                if (tab.size() < 2 || s_abs < tab.front().first || s_abs > tab.back().first)
                    return 0.0;
                auto it = std::upper_bound(tab.begin(), tab.end(), s_abs,
                                           [](double x, const auto& p) { return x < p.first; });
                if (it == tab.begin()) return s.amplitude * tab.front().second;
                if (it == tab.end()) return s.amplitude * tab.back().second;
                const auto& hi = *it;
                const auto& lo = *(it - 1);
                const double w = (s_abs - lo.first) / (hi.first - lo.first);
                return s.amplitude * ((1.0 - w) * lo.second + w * hi.second);
            }
        },
        shape);
}

SpectralVectorField build_force(const ForceProfile& profile, const GridSpec& grid) {
    const double r = profile.support_radius();
    if (!(profile.ell0 > 0.0))
        throw std::invalid_argument("build_force: ell0 must be positive");
    if (r > profile.c / profile.ell0 * (1.0 + 1e-12))
        throw std::invalid_argument("build_force: shape support exceeds the declared c/ell0 ball");
    if (!(r < grid.dealias_cutoff()))
        throw std::invalid_argument("build_force: force support radius " + std::to_string(r) +
                                    " exceeds the grid dealias cutoff " +
                                    std::to_string(grid.dealias_cutoff()));
    if (const Shell* sh = std::get_if<Shell>(&profile.shape); sh && !(sh->r1 < sh->r2))
        throw std::invalid_argument("build_force: empty support (shell needs r1 < r2)");

    // Geometric membership, independent of the amplitude value, so a zero
    // amplitude still yields a (zero) field while a truly empty support errors.
    auto in_shape = [&](double kmag) {
        return std::visit(
            [&](const auto& s) -> bool {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BallIndicator>) {
                    return kmag < profile.c / profile.ell0;
                } else if constexpr (std::is_same_v<T, Shell>) {
                    return kmag >= s.r1 && kmag < s.r2;
                } else {
                    return !s.table.empty() && kmag >= s.table.front().first &&
                           kmag <= s.table.back().first;
                }
            },
            profile.shape);
    };

    SpectralVectorField f(grid);
    const double dk = grid.wavenumber_step();
    std::size_t in_support = 0;
    auto& cx = f.component(0);
    for_each_mode(grid, [&](std::size_t idx, int mx, int my, int mz) {
        if (mx == 0 && my == 0 && mz == 0) return;
        const double kmag = dk * std::sqrt(double(mx) * mx + double(my) * my + double(mz) * mz);
        if (!in_shape(kmag)) return;
        ++in_support;
        cx[idx] = Complex(profile.radial_amplitude(kmag), 0.0);  // constant direction e1
    });
    if (in_support == 0)
        throw std::invalid_argument(
            "build_force: empty support (no lattice mode inside the profile support)");
    leray_project_in_place(f);
    return f;
}

ForceNorms continuum_norms(const ForceProfile& profile) {
    ForceNorms out;
    const double alpha_half = profile.alpha / 2.0;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BallIndicator> || std::is_same_v<T, Shell>) {
                double r1 = 0.0, r2 = 0.0, A = 0.0;
                if constexpr (std::is_same_v<T, BallIndicator>) {
                    r2 = profile.c / profile.ell0;
                    A = s.amplitude;
                } else {
                    r1 = s.r1;
                    r2 = s.r2;
                    A = s.amplitude;
                    if (!(r1 < r2))
                        throw std::invalid_argument("continuum_norms: empty support (r1 >= r2)");
                }
                out.l2 = A * std::sqrt(flat_weighted_square(r1, r2, 0.0));
                out.h_neg1 = A * std::sqrt(flat_weighted_square(r1, r2, 1.0));
                out.h_neg_alpha_half = A * std::sqrt(flat_weighted_square(r1, r2, alpha_half));
                out.laplacian_l2 = A * std::sqrt(flat_weighted_square(r1, r2, -2.0));
                // sup-norm bound on the gradient: (2 pi)^{-3/2} int |xi| ghat dxi
                out.grad_linf = std::pow(kTwoPi, -1.5) * A * kPi *
                                (std::pow(r2, 4) - std::pow(r1, 4));
            } else {
                if (s.table.size() < 2)
                    throw std::invalid_argument("continuum_norms: custom profile needs >= 2 rows");
                const double a = s.table.front().first;
                const double b = s.table.back().first;
                if (a <= 0.0 && profile.alpha >= 3.0 && s.table.front().second != 0.0)
                    throw std::invalid_argument(
                        "continuum_norms: non-integrable H^{-alpha/2} weight for alpha >= 3");
                auto weighted = [&](double expnt) {
                    auto integrand = [&](double x) {
                        const double g = profile.radial_amplitude(x);
                        return 4.0 * kPi * std::pow(x, 2.0 + expnt) * g * g;
                    };
                    return integrate(integrand, std::max(a, 1e-300), b, kQuadratureTol);
                };
                out.l2 = std::sqrt(weighted(0.0));
                out.h_neg1 = std::sqrt(weighted(-2.0));
                out.h_neg_alpha_half = std::sqrt(weighted(-profile.alpha));
                out.laplacian_l2 = std::sqrt(weighted(4.0));
                auto grad_integrand = [&](double x) {
                    return 4.0 * kPi * x * x * x * profile.radial_amplitude(x);
                };
                out.grad_linf = std::pow(kTwoPi, -1.5) *
                                integrate(grad_integrand, std::max(a, 1e-300), b, kQuadratureTol);
            }
        },
        profile.shape);
    out.F = out.l2 / std::pow(profile.ell0, 1.5);
    return out;
}

std::string_view ForceNorms::unit(std::string_view field) {
    // Nominal dimensions under the unitary convention (f is an acceleration);
    // all computations treat quantities as nondimensional numbers.
    if (field == "l2") return "length^{5/2}/time^2";
    if (field == "h_neg1") return "length^{7/2}/time^2";
    if (field == "h_neg_alpha_half") return "length^{(5+alpha)/2}/time^2";
    if (field == "laplacian_l2") return "length^{1/2}/time^2";
    if (field == "grad_linf") return "1/time^2";
    if (field == "F") return "length/time^2";
    return "dimensionless";
}

double grashof(const ForceNorms& norms, double ell0, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("grashof: nu must be positive");
    return norms.l2 * std::pow(ell0, 1.5) / (nu * nu);
}

double damping_beta(const DampingRule& rule, const ForceNorms& norms, double nu, double ell0) {
    double beta = 0.0;
    switch (rule.kind) {
        case DampingRule::Kind::beta_from_force: beta = std::pow(norms.F, 1.5); break;
        case DampingRule::Kind::beta_from_viscosity: beta = nu / (ell0 * ell0); break;
        case DampingRule::Kind::explicit_value: beta = rule.value; break;
    }
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("damping_beta: resolved beta must be positive and finite, got " +
                                    std::to_string(beta));
    return beta;
}

ConditionReport validate_conditions(const ForceProfile& profile, const ForceNorms& norms,
                                    double nu, double alpha, double K) {
    if (!(nu > 0.0 && nu < 2.0))
        throw std::invalid_argument("validate_conditions: requires 0 < nu < 2, got " +
                                    std::to_string(nu));
    const bool fractional = alpha != 2.0;
    if (fractional && !(alpha > 3.0 / 7.0 && alpha < 3.0))
        throw std::invalid_argument("validate_conditions: fractional alpha must lie in (3/7, 3)");

    const double ell0 = profile.ell0;
    double m1_expo = 2.5;
    if (fractional) m1_expo = alpha < 1.0 ? 2.0 - alpha / 2.0 : alpha + 0.5;

    ConditionReport rep;
    rep.K = K;
    auto add = [&](std::string name, double ratio) {
        rep.entries.push_back(
            {std::move(name), ratio, ratio >= K, std::abs(ratio - 1.0) <= 0.05});
    };
    add("m1_l2_over_ell0_pow", norms.l2 / std::pow(ell0, m1_expo));
    add("m2_hneg_over_sqrtnu_l2",
        std::pow(ell0, 9.0 / 8.0) * norms.h_neg_alpha_half /
            (std::sqrt(nu) * std::pow(norms.l2, 7.0 / 4.0)));

    // Amplitude window for flat (constant-in-Fourier) profiles.
    double A = -1.0;
    if (const auto* ball = std::get_if<BallIndicator>(&profile.shape)) A = ball->amplitude;
    if (const auto* shell = std::get_if<Shell>(&profile.shape)) A = shell->amplitude;
    if (A >= 0.0) {
        double lo = 4.0, hi = 13.0 / 3.0;
        if (fractional) {
            lo = alpha < 1.0 ? 3.5 - alpha / 2.0 : alpha + 2.0;
            hi = 3.0 + 2.0 * alpha / 3.0;
        }
        const double wlo = std::pow(ell0, lo), whi = std::pow(ell0, hi);
        const char* where = A < wlo ? "below" : (A > whi ? "above" : "inside");
        rep.linfty_window = std::string(where) + " [ell0^" + std::to_string(lo) + ", ell0^" +
                            std::to_string(hi) + "] = [" + std::to_string(wlo) + ", " +
                            std::to_string(whi) + "]";
    } else {
        rep.linfty_window = "n/a (non-flat profile)";
    }
    return rep;
}

}  // namespace kolmo
