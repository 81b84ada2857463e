#include "kolmo/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "kolmo/spectral_ops.hpp"

namespace kolmo {

EnergyRecorder::EnergyRecorder(const GridSpec& grid, const SpectralVectorField& force,
                               double alpha, double beta, bool with_hyper)
    : grid_(grid), force_(force), beta_(beta), with_hyper_(with_hyper) {
    if (!(force.grid() == grid))
        throw std::invalid_argument("EnergyRecorder: force grid mismatch");
    const double dk = grid.wavenumber_step();
    const double ah = alpha / 2.0;
    wdiss_.resize(grid.site_count());
    if (with_hyper) whyper_.resize(grid.site_count());
    for_each_mode(grid, [&](std::size_t idx, int mx, int my, int mz) {
        const double k2 = dk * dk * (double(mx) * mx + double(my) * my + double(mz) * mz);
        wdiss_[idx] = k2 == 0.0 ? 0.0 : std::pow(k2, ah);
        if (with_hyper_) whyper_[idx] = k2 * k2;
    });
}

EnergyRecord EnergyRecorder::make(const SolverState& state) const {
    EnergyRecord rec;
    rec.t = state.t;
    const double dVk = grid_.spectral_cell_volume();
    double kin = 0.0, diss = 0.0, hyper = 0.0, inj = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto& uc = state.u.component(c);
        const auto& fc = force_.component(c);
        for (std::size_t i = 0; i < uc.size(); ++i) {
            const double mag = std::norm(uc[i]);
            kin += mag;
            diss += wdiss_[i] * mag;
            if (with_hyper_) hyper += whyper_[i] * mag;
            inj += fc[i].real() * uc[i].real() + fc[i].imag() * uc[i].imag();
        }
    }
    rec.kinetic = kin * dVk;
    rec.dissipation = diss * dVk;
    rec.hyper_dissipation = hyper * dVk;
    rec.injection = inj * dVk;
    rec.damping_drain = beta_ * rec.kinetic;
    for (double v : {rec.kinetic, rec.dissipation, rec.hyper_dissipation, rec.injection}) {
        if (!std::isfinite(v))
            throw NonFiniteError("diagnostics: non-finite energy record at t = " +
                                 std::to_string(state.t));
    }
    return rec;
}

EnergyRecord make_record(const SolverState& state, const SpectralVectorField& force, double alpha,
                         double beta, bool with_hyper) {
    return EnergyRecorder(state.u.grid(), force, alpha, beta, with_hyper).make(state);
}

DiagnosticsLedger::DiagnosticsLedger(double u0_l2_squared, double nu, double beta, double epsilon)
    : u0_sq_(u0_l2_squared), nu_(nu), beta_(beta), epsilon_(epsilon) {}

void DiagnosticsLedger::append(const EnergyRecord& record) {
    if (!records_.empty()) {
        const EnergyRecord& prev = records_.back();
        const double dt = record.t - prev.t;
        if (!(dt > 0.0))
            throw std::invalid_argument("DiagnosticsLedger: records must advance in time");
        int_kin_ += 0.5 * dt * (record.kinetic + prev.kinetic);
        int_diss_ += 0.5 * dt * (record.dissipation + prev.dissipation);
        int_inj_ += 0.5 * dt * (record.injection + prev.injection);
        int_hyper_ += 0.5 * dt * (record.hyper_dissipation + prev.hyper_dissipation);
    }
    records_.push_back(record);
    residuals_.push_back(u0_sq_ - record.kinetic - 2.0 * nu_ * int_diss_ + 2.0 * int_inj_ -
                         2.0 * beta_ * int_kin_ - 2.0 * epsilon_ * int_hyper_);
}

void DiagnosticsLedger::write_csv(std::ostream& out) const {
    out << "t,kinetic,dissipation,hyper_dissipation,injection,damping_drain,residual\n";
    char buf[256];
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const EnergyRecord& r = records_[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                      r.kinetic, r.dissipation, r.hyper_dissipation, r.injection, r.damping_drain,
                      residuals_[i]);
        out << buf;
    }
}

std::vector<double> energy_inequality_residual(const std::vector<EnergyRecord>& records,
                                               double u0_l2_squared, double nu, double beta,
                                               double epsilon) {
    if (records.size() < 2)
        throw std::invalid_argument("energy_inequality_residual: needs at least 2 records");
    DiagnosticsLedger ledger(u0_l2_squared, nu, beta, epsilon);
    for (const auto& r : records) ledger.append(r);
    return ledger.residuals();
}

namespace {

/// Trapezoid of the (linearly interpolated) series over [a, b] clipped to the
/// record span.
double clipped_trapezoid(const std::vector<EnergyRecord>& records, double a, double b,
                         double EnergyRecord::* field) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const double t0 = records[i].t, t1 = records[i + 1].t;
        const double lo = std::max(a, t0), hi = std::min(b, t1);
        if (!(hi > lo)) continue;
        const double y0 = records[i].*field, y1 = records[i + 1].*field;
        const double inv = 1.0 / (t1 - t0);
        const double ylo = y0 + (y1 - y0) * (lo - t0) * inv;
        const double yhi = y0 + (y1 - y0) * (hi - t0) * inv;
        sum += 0.5 * (hi - lo) * (ylo + yhi);
    }
    return sum;
}

}  // namespace

RunningAverages finalize_averages(const std::vector<EnergyRecord>& records, double ell0, double nu,
                                  double alpha, double beta, double burn_in) {
    (void)alpha;  // the records already carry the alpha/2 dissipation norm
    if (records.size() < 2)
        throw std::invalid_argument("finalize_averages: needs at least 2 records");
    const double T = records.back().t;
    const double T0 = burn_in;
    if (!(T - T0 >= 10.0 / beta))
        throw std::invalid_argument(
            "finalize_averages: insufficient horizon (need T - T0 >= 10/beta = " +
            std::to_string(10.0 / beta) + ", have " + std::to_string(T - T0) + ")");

    RunningAverages avg;
    avg.horizon = T;
    avg.burn_in = T0;
    const double span = T - T0;
    avg.mean_kinetic = clipped_trapezoid(records, T0, T, &EnergyRecord::kinetic) / span;
    avg.mean_dissipation = clipped_trapezoid(records, T0, T, &EnergyRecord::dissipation) / span;
    const double ell3 = ell0 * ell0 * ell0;
    avg.U = std::sqrt(avg.mean_kinetic / ell3);
    avg.E_alpha = nu * avg.mean_dissipation / ell3;
    avg.Re = avg.U * ell0 / nu;

    // Stationarity: window halves must agree within 2% or the run is flagged.
    const double mid = 0.5 * (T0 + T);
    double gap = 0.0;
    for (auto field : {&EnergyRecord::kinetic, &EnergyRecord::dissipation}) {
        const double a1 = clipped_trapezoid(records, T0, mid, field) / (mid - T0);
        const double a2 = clipped_trapezoid(records, mid, T, field) / (T - mid);
        const double scale = std::max({std::abs(a1), std::abs(a2), 1e-300});
        gap = std::max(gap, std::abs(a1 - a2) / scale);
    }
    avg.half_split_gap = gap;
    avg.converged = gap <= 0.02;
    return avg;
}

double appendix_a_ceiling(double f_hneg1, double nu, double ell0) {
    if (!(nu > 0.0 && ell0 > 0.0))
        throw std::invalid_argument("appendix_a_ceiling: nu and ell0 must be positive");
    return f_hneg1 * f_hneg1 / (nu * ell0 * ell0 * ell0);
}

double velocity_squared_ceiling(double f_hneg_alpha_half, double nu, double beta, double ell0) {
    if (!(nu > 0.0 && beta > 0.0 && ell0 > 0.0))
        throw std::invalid_argument("velocity_squared_ceiling: nu, beta, ell0 must be positive");
    return f_hneg_alpha_half * f_hneg_alpha_half / (nu * beta * ell0 * ell0 * ell0);
}

}  // namespace kolmo
