#pragma once

#include <iosfwd>
#include <vector>

#include "kolmo/field.hpp"
#include "kolmo/solver.hpp"

namespace kolmo {

/// One row of the per-step energy budget.
struct EnergyRecord {
    double t = 0.0;
    double kinetic = 0.0;            // ||u||_{L2}^2
    double dissipation = 0.0;        // ||u||_{H^{alpha/2}}^2
    double hyper_dissipation = 0.0;  // ||u||_{H^2}^2, tracked when epsilon > 0
    double injection = 0.0;          // <f, u> spectral pairing
    double damping_drain = 0.0;      // beta ||u||_{L2}^2
};

/// Per-step budget evaluator with cached spectral weights; the workhorse for
/// record loops. Throws NonFiniteError on any non-finite scalar.
class EnergyRecorder {
  public:
    EnergyRecorder(const GridSpec& grid, const SpectralVectorField& force, double alpha,
                   double beta, bool with_hyper);

    EnergyRecord make(const SolverState& state) const;

  private:
    GridSpec grid_;
    const SpectralVectorField& force_;
    double beta_;
    bool with_hyper_;
    std::vector<double> wdiss_, whyper_;
};

/// One-shot convenience wrapper around EnergyRecorder.
EnergyRecord make_record(const SolverState& state, const SpectralVectorField& force, double alpha,
                         double beta, bool with_hyper);

/// Append-only per-run ledger. Maintains the running trapezoidal integrals
/// of the budget terms and the energy-inequality residual
///   R(t) = ||u0||^2 - ||u(t)||^2 - 2 nu I_diss + 2 I_inj - 2 beta I_kin - 2 eps I_hyper,
/// which is >= 0 (up to quadrature and scheme error) along admissible runs.
class DiagnosticsLedger {
  public:
    DiagnosticsLedger(double u0_l2_squared, double nu, double beta, double epsilon);

    void append(const EnergyRecord& record);

    const std::vector<EnergyRecord>& records() const { return records_; }
    const std::vector<double>& residuals() const { return residuals_; }
    double u0_l2_squared() const { return u0_sq_; }

    /// Exact CSV contract: header
    /// t,kinetic,dissipation,hyper_dissipation,injection,damping_drain,residual
    void write_csv(std::ostream& out) const;

  private:
    double u0_sq_, nu_, beta_, epsilon_;
    double int_kin_ = 0.0, int_diss_ = 0.0, int_inj_ = 0.0, int_hyper_ = 0.0;
    std::vector<EnergyRecord> records_;
    std::vector<double> residuals_;
};

/// Standalone residual series over a record span (same trapezoidal quadrature
/// the ledger uses).
std::vector<double> energy_inequality_residual(const std::vector<EnergyRecord>& records,
                                               double u0_l2_squared, double nu, double beta,
                                               double epsilon);

struct RunningAverages {
    double horizon = 0.0;   // T
    double burn_in = 0.0;   // T0
    double mean_kinetic = 0.0;
    double mean_dissipation = 0.0;
    double U = 0.0;        // sqrt(mean_kinetic / ell0^3)
    double E_alpha = 0.0;  // nu * mean_dissipation / ell0^3
    double Re = 0.0;       // U ell0 / nu
    bool converged = false;   // window-halves stationarity check (2%)
    double half_split_gap = 0.0;
};

/// Trapezoidal averages over [T0, T]; requires T - T0 >= 10/beta.
RunningAverages finalize_averages(const std::vector<EnergyRecord>& records, double ell0, double nu,
                                  double alpha, double beta, double burn_in);

/// ||f||_{H^{-1}}^2 / (nu ell0^3): ceiling on the measured dissipation rate.
double appendix_a_ceiling(double f_hneg1, double nu, double ell0);

/// ||f||_{H^{-alpha/2}}^2 / (nu beta ell0^3): ceiling on U^2.
double velocity_squared_ceiling(double f_hneg_alpha_half, double nu, double beta, double ell0);

}  // namespace kolmo
