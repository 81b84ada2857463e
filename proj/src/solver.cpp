#include "kolmo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kolmo/fft.hpp"
#include "kolmo/spectral_ops.hpp"

namespace kolmo {

void resolve_damping(SimConfig& config, const ForceNorms& norms, double ell0) {
    config.beta = damping_beta(config.damping, norms, config.nu, ell0);
}

void validate(const SimConfig& config) {
    if (!(config.nu > 0.0)) throw std::invalid_argument("SimConfig: nu must be positive");
    if (!(config.alpha > 0.0 && config.alpha < 4.0))
        throw std::invalid_argument("SimConfig: alpha must lie in (0, 4)");
    if (!(config.beta > 0.0))
        throw std::invalid_argument("SimConfig: beta must be positive after rule resolution");
    if (config.delta < 0.0) throw std::invalid_argument("SimConfig: delta must be non-negative");
    if (config.epsilon < 0.0)
        throw std::invalid_argument("SimConfig: epsilon must be non-negative");
    if (!(config.dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
    if (!(config.burn_in < config.t_end))
        throw std::invalid_argument("SimConfig: burn_in must be smaller than t_end");
}

SpectralVectorField transport_term(const SpectralVectorField& u, double delta) {
    const GridSpec& g = u.grid();
    const int n = g.n();
    const std::size_t sites = g.site_count();
    const double dk = g.wavenumber_step();
    const double L3 = g.L() * g.L() * g.L();
    const double to_phys = std::pow(kTwoPi, 1.5) / L3;
    const double to_spec = g.physical_cell_volume() / std::pow(kTwoPi, 1.5);

    // Physical samples of u, of the mollified advecting velocity v, and of
    // all nine derivatives d_j u_i.
    std::array<std::vector<double>, 3> up, vp;
    std::array<std::array<std::vector<double>, 3>, 3> dup;  // dup[i][j] = d_j u_i
    std::vector<Complex> scratch(sites);

    const double d2 = delta * delta;
    const bool mollified = delta > 0.0;
    for (int c = 0; c < 3; ++c) {
        scratch = u.component(c);
        detail::fft3_backward(n, scratch.data());
        up[c].resize(sites);
        for (std::size_t i = 0; i < sites; ++i) up[c][i] = scratch[i].real() * to_phys;

        if (mollified) {
            scratch = u.component(c);
            for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
                const double kx = dk * mx, ky = dk * my, kz = dk * mz;
                scratch[idx] *= std::exp(-d2 * (kx * kx + ky * ky + kz * kz));
            });
            detail::fft3_backward(n, scratch.data());
            vp[c].resize(sites);
            for (std::size_t i = 0; i < sites; ++i) vp[c][i] = scratch[i].real() * to_phys;
        }

        for (int axis = 0; axis < 3; ++axis) {
            const auto& coeffs = u.component(c);
            for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
                const int m = axis == 0 ? mx : (axis == 1 ? my : mz);
                scratch[idx] = Complex(0.0, dk * m) * coeffs[idx];
            });
            detail::fft3_backward(n, scratch.data());
            dup[c][axis].resize(sites);
            for (std::size_t i = 0; i < sites; ++i)
                dup[c][axis][i] = scratch[i].real() * to_phys;
        }
    }
    const auto& adv = mollified ? vp : up;

    SpectralVectorField out(g);

    // Convective half: (v . grad) u_i, transformed back per component.
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < sites; ++i) {
            const double conv =
                adv[0][i] * dup[c][0][i] + adv[1][i] * dup[c][1][i] + adv[2][i] * dup[c][2][i];
            scratch[i] = Complex(conv, 0.0);
        }
        detail::fft3_forward(n, scratch.data());
        auto& oc = out.component(c);
        for (std::size_t i = 0; i < sites; ++i) oc[i] = scratch[i] * to_spec;
    }

    // Divergence half: sum_j i k_j FFT(v_j u_i). With delta = 0 the products
    // are symmetric in (i, j), so only six transforms are needed.
    std::array<std::array<std::vector<Complex>, 3>, 3> what;
    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < 3; ++j) {
            if (!mollified && j < c) continue;  // u_c u_j already transformed as (j, c)
            for (std::size_t i = 0; i < sites; ++i)
                scratch[i] = Complex(adv[j][i] * up[c][i], 0.0);
            detail::fft3_forward(n, scratch.data());
            what[c][j].resize(sites);
            for (std::size_t i = 0; i < sites; ++i) what[c][j][i] = scratch[i] * to_spec;
        }
    }
    auto product_hat = [&](int c, int j) -> const std::vector<Complex>& {
        if (!mollified && j < c) return what[j][c];
        return what[c][j];
    };
    for (int c = 0; c < 3; ++c) {
        auto& oc = out.component(c);
        const auto& w0 = product_hat(c, 0);
        const auto& w1 = product_hat(c, 1);
        const auto& w2 = product_hat(c, 2);
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            const Complex div = Complex(0.0, dk * mx) * w0[idx] +
                                Complex(0.0, dk * my) * w1[idx] +
                                Complex(0.0, dk * mz) * w2[idx];
            oc[idx] = 0.5 * (oc[idx] + div);
        });
    }

    apply_multiplier_in_place(DealiasTwoThirds{}, out);
    leray_project_in_place(out);
    out.pin_zero_mode();
    return out;
}

// ---------------------------------------------------------------------------

struct Stepper::Impl {
    SimConfig config;
    SpectralVectorField force_field;
    double dt = 0.0;

    // Per-site exponential tables for the full and half step.
    std::vector<double> decay_full, phi_full, decay_half, phi_half;

    double guard_threshold = -1.0;  // set lazily from the first state seen

    explicit Impl(const SimConfig& cfg, SpectralVectorField f)
        : config(cfg), force_field(std::move(f)) {
        validate(config);
        if (!(force_field.grid() == config.grid))
            throw std::invalid_argument("Stepper: force grid does not match config grid");
        rebuild_tables(config.dt);
    }

    void rebuild_tables(double new_dt) {
        dt = new_dt;
        const GridSpec& g = config.grid;
        const double dk = g.wavenumber_step();
        const double nu = config.nu, beta = config.beta, eps = config.epsilon;
        const double ah = config.alpha / 2.0;
        decay_full.resize(g.site_count());
        phi_full.resize(g.site_count());
        decay_half.resize(g.site_count());
        phi_half.resize(g.site_count());
        for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
            const double kx = dk * mx, ky = dk * my, kz = dk * mz;
            const double k2 = kx * kx + ky * ky + kz * kz;
            const double lambda = nu * (k2 == 0.0 ? 0.0 : std::pow(k2, ah)) + beta + eps * k2 * k2;
            decay_full[idx] = std::exp(-lambda * dt);
            phi_full[idx] = -std::expm1(-lambda * dt) / lambda;
            decay_half[idx] = std::exp(-lambda * 0.5 * dt);
            phi_half[idx] = -std::expm1(-lambda * 0.5 * dt) / lambda;
        });
    }

    // un = decay .* u + phi .* (fhat + nhat)
    void linear_combine(const SpectralVectorField& u, const SpectralVectorField* nonlinear,
                        const std::vector<double>& decay, const std::vector<double>& phi,
                        SpectralVectorField& out) const {
        for (int c = 0; c < 3; ++c) {
            const auto& uc = u.component(c);
            const auto& fc = force_field.component(c);
            auto& oc = out.component(c);
            if (nonlinear) {
                const auto& nc = nonlinear->component(c);
                for (std::size_t i = 0; i < uc.size(); ++i)
                    oc[i] = decay[i] * uc[i] + phi[i] * (fc[i] + nc[i]);
            } else {
                for (std::size_t i = 0; i < uc.size(); ++i)
                    oc[i] = decay[i] * uc[i] + phi[i] * fc[i];
            }
        }
        out.pin_zero_mode();
    }

    double l2_norm(const SpectralVectorField& v) const { return sobolev_norm(v, 0.0); }

    SolverState advance(const SolverState& state) {
        if (guard_threshold < 0.0) {
            const double f_hneg = sobolev_norm(force_field, -config.alpha / 2.0);
            const double ceiling = f_hneg / std::sqrt(config.nu * config.beta);
            guard_threshold = 1e3 * (ceiling + l2_norm(state.u));
        }

        SolverState next{state.t + dt, SpectralVectorField(config.grid), state.step_index + 1};
        if (config.transport_enabled) {
            SpectralVectorField n1 = transport_term(state.u, config.delta);
            n1.scale(-1.0);
            SpectralVectorField uh(config.grid);
            linear_combine(state.u, &n1, decay_half, phi_half, uh);
            SpectralVectorField n2 = transport_term(uh, config.delta);
            n2.scale(-1.0);
            linear_combine(state.u, &n2, decay_full, phi_full, next.u);
        } else {
            linear_combine(state.u, nullptr, decay_full, phi_full, next.u);
        }

        if (config.invariant_check_every > 0 &&
            next.step_index % config.invariant_check_every == 0) {
            const double scale = std::max(next.u.max_abs_coefficient(), 1.0);
            if (next.u.hermitian_defect() > 1e-10 * scale)
                throw NonFiniteError("solver invariant: Hermitian symmetry lost at t = " +
                                     std::to_string(next.t));
            if (next.u.divergence_defect() > 1e-10)
                throw NonFiniteError("solver invariant: divergence-freeness lost at t = " +
                                     std::to_string(next.t));
        }

        const double l2 = l2_norm(next.u);
        if (!std::isfinite(l2))
            throw NonFiniteError("solver: non-finite state at t = " + std::to_string(next.t));
        if (l2 > guard_threshold)
            throw BlowupError("solver: blow-up guard tripped at t = " + std::to_string(next.t) +
                              " (||u|| = " + std::to_string(l2) + " > " +
                              std::to_string(guard_threshold) + ")");
        return next;
    }
};

Stepper::Stepper(const SimConfig& config, SpectralVectorField force)
    : impl_(std::make_unique<Impl>(config, std::move(force))) {}
Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

SolverState Stepper::step(const SolverState& state) { return impl_->advance(state); }

void Stepper::set_dt(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("Stepper::set_dt: dt must be positive");
    if (dt != impl_->dt) impl_->rebuild_tables(dt);
}

double Stepper::dt() const { return impl_->dt; }
double Stepper::beta() const { return impl_->config.beta; }
const SpectralVectorField& Stepper::force() const { return impl_->force_field; }

SolverState step_imex(const SolverState& state, const SimConfig& config,
                      const SpectralVectorField& force) {
    Stepper stepper(config, force);
    return stepper.step(state);
}

SpectralVectorField stokes_exact(const SpectralVectorField& u0, const SpectralVectorField& f,
                                 double nu, double beta, double t) {
    if (!(nu > 0.0 && beta > 0.0))
        throw std::invalid_argument("stokes_exact: nu and beta must be positive");
    if (!(u0.grid() == f.grid()))
        throw std::invalid_argument("stokes_exact: grid mismatch between u0 and f");
    const GridSpec& g = u0.grid();
    const double dk = g.wavenumber_step();
    SpectralVectorField out(g);
    for_each_mode(g, [&](std::size_t idx, int mx, int my, int mz) {
        const double kx = dk * mx, ky = dk * my, kz = dk * mz;
        const double lambda = nu * (kx * kx + ky * ky + kz * kz) + beta;
        const double decay = std::exp(-lambda * t);
        const double steady = -std::expm1(-lambda * t) / lambda;
        for (int c = 0; c < 3; ++c)
            out.at(c, idx) = decay * u0.at(c, idx) + steady * f.at(c, idx);
    });
    out.pin_zero_mode();
    return out;
}

double gronwall_ceiling(double u0_l2, double f_hneg1, double nu, double beta, double t) {
    if (!(nu > 0.0 && beta > 0.0))
        throw std::invalid_argument("gronwall_ceiling: nu and beta must be positive");
    return std::exp(-beta * t) * u0_l2 * u0_l2 + f_hneg1 * f_hneg1 / (nu * beta);
}

namespace {

/// Deterministic standard normal from a 64-bit engine (Box-Muller); avoids
/// the implementation-defined std::normal_distribution sequence.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return radius * std::cos(kTwoPi * u2);
    }

  private:
    double uniform() {
        return (rng_() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0,1)
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

SpectralVectorField make_initial_condition(const InitialCondition& ic, const GridSpec& grid) {
    return std::visit(
        [&](const auto& v) -> SpectralVectorField {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ZeroInitial>) {
                return SpectralVectorField(grid);
            } else if constexpr (std::is_same_v<T, SpectralVectorField>) {
                if (!(v.grid() == grid))
                    throw std::invalid_argument("initial condition: grid mismatch");
                SpectralVectorField u = v;
                apply_multiplier_in_place(DealiasTwoThirds{}, u);
                leray_project_in_place(u);
                u.pin_zero_mode();
                return u;
            } else {
                if (!(v.cutoff > 0.0))
                    throw std::invalid_argument("random_lowpass: cutoff must be positive");
                if (!(v.cutoff <= grid.dealias_cutoff()))
                    throw std::invalid_argument(
                        "random_lowpass: cutoff exceeds the grid dealias cutoff");
                if (v.energy < 0.0)
                    throw std::invalid_argument("random_lowpass: energy must be non-negative");
                SpectralVectorField u(grid);
                GaussianStream gauss(v.seed);
                const double dk = grid.wavenumber_step();
                const double cut2 = v.cutoff * v.cutoff;
                // Fill only the canonical half-lattice, mirror the conjugate.
                for_each_mode(grid, [&](std::size_t idx, int mx, int my, int mz) {
                    const bool canonical =
                        mx > 0 || (mx == 0 && my > 0) || (mx == 0 && my == 0 && mz > 0);
                    if (!canonical) return;
                    const double k2 = dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz);
                    if (k2 >= cut2) return;
                    const int n = grid.n();
                    const int ix = mx < 0 ? mx + n : mx;
                    const int iy = my < 0 ? my + n : my;
                    const int iz = mz < 0 ? mz + n : mz;
                    const std::size_t mir = grid.mirror_index(ix, iy, iz);
                    for (int c = 0; c < 3; ++c) {
                        const Complex z(gauss.next(), gauss.next());
                        u.at(c, idx) = z;
                        u.at(c, mir) = std::conj(z);
                    }
                });
                leray_project_in_place(u);
                const double norm = sobolev_norm(u, 0.0);
                if (norm > 0.0 && v.energy > 0.0)
                    u.scale(std::sqrt(v.energy) / norm);
                else
                    u.set_zero();
                return u;
            }
        },
        ic);
}

}  // namespace kolmo
