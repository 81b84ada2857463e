#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "kolmo/field.hpp"
#include "kolmo/forcing.hpp"

namespace kolmo {

struct ZeroInitial {};

/// Seeded Hermitian Gaussian coefficients below |k| < cutoff, projected and
/// rescaled so that ||u||_{L2}^2 equals the requested energy.
struct RandomLowpass {
    std::uint64_t seed = 0;
    double energy = 1.0;
    double cutoff = 1.0;
};

using InitialCondition = std::variant<ZeroInitial, RandomLowpass, SpectralVectorField>;

/// All model parameters for one simulation.
struct SimConfig {
    GridSpec grid;
    double nu = 1.0;
    double alpha = 2.0;  // fractional dissipation exponent, 0 < alpha < 4
    DampingRule damping;
    double beta = -1.0;    // resolved damping rate; set via resolve_damping()
    double delta = 0.0;    // mollification length for the transport velocity
    double epsilon = 0.0;  // hyperviscosity coefficient (0 disables)
    double dt = 1e-3;
    double t_end = 1.0;
    double burn_in = 0.0;
    InitialCondition initial = ZeroInitial{};
    bool transport_enabled = true;
    double cfl_number = 0.25;       // advective cap: dt <= cfl * h / max|u|
    int cfl_check_every = 10;       // steps between CFL re-evaluations
    int invariant_check_every = 100;  // steps between Hermitian/divergence asserts
};

/// Resolve the damping rule against the force's continuum norms.
void resolve_damping(SimConfig& config, const ForceNorms& norms, double ell0);

void validate(const SimConfig& config);

struct SolverState {
    double t = 0.0;
    SpectralVectorField u;
    long step_index = 0;
};

/// Dealiased, Leray-projected skew-symmetric transport
/// P( 1/2 [ (v . grad) u + div(v x u) ] ) with v = mollifier(delta) u.
/// Energy-neutral against u up to round-off by construction.
SpectralVectorField transport_term(const SpectralVectorField& u, double delta);

struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integrating-factor stepper: the linear symbol
/// lambda(k) = nu |k|^alpha + beta + epsilon |k|^4 is applied exactly per
/// mode; the transport term is advanced with an RK2 midpoint stage. Exact on
/// the linear (Stokes) system for any dt. Carries reusable workspace and the
/// per-mode exponential tables, so dt changes rebuild the tables.
class Stepper {
  public:
    Stepper(const SimConfig& config, SpectralVectorField force);
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;

    SolverState step(const SolverState& state);

    void set_dt(double dt);
    double dt() const;
    double beta() const;
    const SpectralVectorField& force() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One integrating-factor step through a temporary Stepper. Prefer Stepper
/// for loops; this exists for one-shot use.
SolverState step_imex(const SolverState& state, const SimConfig& config,
                      const SpectralVectorField& force);

/// Exact damped-Stokes propagator:
/// u(t,k) = e^{-(nu|k|^2+beta)t} u0(k) + (1-e^{-(nu|k|^2+beta)t})/(nu|k|^2+beta) f(k).
SpectralVectorField stokes_exact(const SpectralVectorField& u0, const SpectralVectorField& f,
                                 double nu, double beta, double t);

/// e^{-beta t} ||u0||^2 + ||f||_{H^{-1}}^2 / (nu beta); runtime ceiling on ||u(t)||^2.
double gronwall_ceiling(double u0_l2, double f_hneg1, double nu, double beta, double t);

SpectralVectorField make_initial_condition(const InitialCondition& ic, const GridSpec& grid);

}  // namespace kolmo
