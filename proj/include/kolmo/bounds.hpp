#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace kolmo {

/// One audited inequality, normalized as lhs <= rhs.
struct BoundEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double margin = 0.0;  // rhs - lhs, or the ratio where the note says so
    std::string note;
};

/// Structured pass/fail-with-margin results for one regime. `inputs` records
/// every number the entries were computed from, so a report can be re-verified
/// offline (see reverify()).
struct BoundReport {
    std::string regime;  // classical | fractional | stokes | appendix_c | small_grashof
    std::vector<BoundEntry> entries;
    std::map<std::string, double> inputs;
};

/// 1 << F <= U <= F^{3/2} ell0^{alpha-1} (alpha = 2 gives the classical chain).
std::vector<BoundEntry> check_lemma_chain(double F, double U, double ell0, double alpha);

/// Two-sided dissipation law: sharp constants (1/2, 101/10) plus the
/// Grashof-dependent intermediate coefficients
/// (1 - ell0^4/(nu^2 Gr)) and (10 + ell0^8/(10 nu^4 Gr^2)).
std::vector<BoundEntry> check_main_law(double U, double E, double ell0, double nu, double Gr);

/// Fractional law (1/2, 401/40 against U^3/ell0^{alpha-1}) plus the
/// hypothesis ell0^{alpha+2}/(nu^2 Gr) <= 1/2. Certified for 3/7 < alpha < 3.
std::vector<BoundEntry> check_fractional_law(double U, double E_alpha, double ell0, double nu,
                                             double Gr, double alpha);

/// Alternative-damping audit (beta = nu/ell0^2): hypothesis 2 Gr <= Re,
/// the unconditional E <= F U, and F <= c (1/Gr + 1) U^2 / ell0 with the
/// empirically implied constant recorded in the note.
std::vector<BoundEntry> check_appendix_c(double U, double E, double F, double ell0, double nu,
                                         double Gr, double Re, double c_const);

struct SweepGrid {
    std::vector<double> ell0;
    std::vector<double> nu;
    std::vector<double> force_factor;  // ||f||_{L2} as multiples of the premise scale
    std::vector<double> alpha;
    double K = 2.0;  // premise factor for the "much greater" hypotheses
};

struct SweepResult {
    long points_checked = 0;
    std::vector<std::string> counterexamples;  // verbatim parameter tuples
};

/// Brute-force the purely algebraic implications over the grid:
///  (i)  ||f|| >= K ell0^{5/2}        =>  ell0^4/(nu^2 Gr)   <= 1/K
///  (ii) ||f|| >= ell0^{5/2}          =>  ell0^8/(nu^4 Gr^2) <= 1
///  (iii) F <= U                      =>  Gr <= (ell0^2/nu) Re
///  (iv) fractional analogue of (i) with the alpha-split premise exponent.
SweepResult algebraic_regime_sweep(const SweepGrid& grid);

/// 10^4-point log-spaced default grid.
SweepGrid default_sweep_grid();

nlohmann::ordered_json to_json(const BoundReport& report);
BoundReport report_from_json(const nlohmann::ordered_json& j);

/// Recompute a report's entries from its recorded inputs and compare
/// numerically; true when every entry reproduces exactly.
bool reverify(const BoundReport& report);

}  // namespace kolmo
