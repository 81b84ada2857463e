#include "kolmo/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kolmo {

namespace {

BoundEntry leq_entry(std::string name, double lhs, double rhs, std::string note = {}) {
    BoundEntry e;
    e.name = std::move(name);
    e.lhs = lhs;
    e.rhs = rhs;
    e.satisfied = lhs <= rhs;
    e.margin = rhs - lhs;
    e.note = std::move(note);
    if (std::abs(rhs - lhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) {
        if (!e.note.empty()) e.note += "; ";
        e.note += "equality edge";
    }
    return e;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::vector<BoundEntry> check_lemma_chain(double F, double U, double ell0, double alpha) {
    std::vector<BoundEntry> out;
    BoundEntry much;
    much.name = "F_much_greater_than_1";
    much.lhs = 1.0;
    much.rhs = F;
    much.satisfied = F > 1.0;
    much.margin = F;  // ratio F/1; read against the configured K
    much.note = "margin is the ratio F/1";
    out.push_back(much);
    out.push_back(leq_entry("F_leq_U", F, U));
    out.push_back(leq_entry("U_leq_F32_ell0_pow", U, std::pow(F, 1.5) * std::pow(ell0, alpha - 1.0),
                            "rhs = F^{3/2} ell0^{alpha-1}, alpha = " + fmt(alpha)));
    return out;
}

std::vector<BoundEntry> check_main_law(double U, double E, double ell0, double nu, double Gr) {
    const double u3l = U * U * U / ell0;
    const double low_coef = 1.0 - std::pow(ell0, 4) / (nu * nu * Gr);
    const double up_coef = 10.0 + std::pow(ell0, 8) / (10.0 * std::pow(nu, 4) * Gr * Gr);
    std::vector<BoundEntry> out;
    out.push_back(leq_entry("lower_sharp_half", 0.5 * u3l, E, "coefficient 1/2"));
    out.push_back(leq_entry("upper_sharp_101_10", E, 10.1 * u3l, "coefficient 101/10"));
    out.push_back(leq_entry("lower_grashof", low_coef * u3l, E,
                            "coefficient 1 - ell0^4/(nu^2 Gr) = " + fmt(low_coef)));
    out.push_back(leq_entry("upper_grashof", E, up_coef * u3l,
                            "coefficient 10 + ell0^8/(10 nu^4 Gr^2) = " + fmt(up_coef)));
    return out;
}

std::vector<BoundEntry> check_fractional_law(double U, double E_alpha, double ell0, double nu,
                                             double Gr, double alpha) {
    if (!(alpha > 3.0 / 7.0 && alpha < 3.0))
        throw std::invalid_argument(
            "check_fractional_law: certified range is 3/7 < alpha < 3, got " + fmt(alpha));
    const double u3l = U * U * U / std::pow(ell0, alpha - 1.0);
    std::vector<BoundEntry> out;
    out.push_back(leq_entry("hypothesis_gr_fractional", std::pow(ell0, alpha + 2.0) / (nu * nu * Gr),
                            0.5, "ell0^{alpha+2}/(nu^2 Gr) <= 1/2"));
    out.push_back(leq_entry("lower_sharp_half_fractional", 0.5 * u3l, E_alpha,
                            "coefficient 1/2 against U^3/ell0^{alpha-1}"));
    out.push_back(leq_entry("upper_sharp_401_40_fractional", E_alpha, 401.0 / 40.0 * u3l,
                            "coefficient 401/40 against U^3/ell0^{alpha-1}"));
    return out;
}

std::vector<BoundEntry> check_appendix_c(double U, double E, double F, double ell0, double nu,
                                         double Gr, double Re, double c_const) {
    (void)nu;
    std::vector<BoundEntry> out;
    out.push_back(leq_entry("hypothesis_2Gr_leq_Re", 2.0 * Gr, Re));
    out.push_back(leq_entry("E_leq_FU", E, F * U, "unconditional"));
    const double shape = (1.0 / Gr + 1.0) * U * U / ell0;
    const double implied_c = F / shape;
    out.push_back(leq_entry("F_leq_c_grashof_U2", F, c_const * shape,
                            "existential constant; implied c = " + fmt(implied_c) +
                                ", asserted c = " + fmt(c_const)));
    return out;
}

SweepGrid default_sweep_grid() {
    SweepGrid g;
    auto log_space = [](double lo, double hi, int count) {
        std::vector<double> v(count);
        const double step = std::log(hi / lo) / (count - 1);
        for (int i = 0; i < count; ++i) v[i] = lo * std::exp(step * i);
        return v;
    };
    g.ell0 = log_space(1.01, 1e3, 10);
    g.nu = log_space(1e-2, 1.99, 10);
    g.force_factor = log_space(1e-1, 1e3, 10);
    g.alpha = log_space(3.0 / 7.0 + 1e-3, 3.0 - 1e-3, 10);
    g.K = 2.0;
    return g;
}

SweepResult algebraic_regime_sweep(const SweepGrid& grid) {
    SweepResult result;
    auto record = [&](const char* which, double ell0, double nu, double fl2, double alpha,
                      double lhs, double rhs) {
        std::ostringstream os;
        os.precision(17);
        os << which << ": ell0=" << ell0 << " nu=" << nu << " f_l2=" << fl2
           << " alpha=" << alpha << " lhs=" << lhs << " rhs=" << rhs;
        result.counterexamples.push_back(os.str());
    };

    for (double ell0 : grid.ell0) {
        for (double nu : grid.nu) {
            for (double factor : grid.force_factor) {
                for (double alpha : grid.alpha) {
                    ++result.points_checked;
                    const double premise_scale = std::pow(ell0, 2.5);
                    const double fl2 = factor * grid.K * premise_scale;
                    const double Gr = fl2 * std::pow(ell0, 1.5) / (nu * nu);

                    // (i) ||f|| >= K ell0^{5/2}  =>  ell0^4/(nu^2 Gr) <= 1/K
                    if (fl2 >= grid.K * premise_scale) {
                        const double lhs = std::pow(ell0, 4) / (nu * nu * Gr);
                        if (!(lhs <= 1.0 / grid.K + 1e-15))
                            record("(i)", ell0, nu, fl2, alpha, lhs, 1.0 / grid.K);
                    }
                    // (ii) ||f|| >= ell0^{5/2}  =>  ell0^8/(nu^4 Gr^2) <= 1
                    if (fl2 >= premise_scale) {
                        const double lhs = std::pow(ell0, 8) / (std::pow(nu, 4) * Gr * Gr);
                        if (!(lhs <= 1.0 + 1e-15)) record("(ii)", ell0, nu, fl2, alpha, lhs, 1.0);
                    }
                    // (iii) F <= U  =>  Gr <= (ell0^2/nu) Re, with U swept as a
                    // multiple of F so the premise is genuinely exercised.
                    {
                        const double F = fl2 / std::pow(ell0, 1.5);
                        const double U = factor >= 1.0 ? F * factor : F / 2.0;
                        const double Re = U * ell0 / nu;
                        if (F <= U) {
                            if (!(Gr <= ell0 * ell0 / nu * Re * (1.0 + 1e-12)))
                                record("(iii)", ell0, nu, fl2, alpha, Gr, ell0 * ell0 / nu * Re);
                        }
                    }
                    // (iv) fractional premise split => ell0^{alpha+2}/(nu^2 Gr) <= 1/K
                    {
                        const double expo = alpha < 1.0 ? 2.0 - alpha / 2.0 : alpha + 0.5;
                        if (fl2 >= grid.K * std::pow(ell0, expo) &&
                            fl2 >= grid.K * std::pow(ell0, alpha + 0.5)) {
                            const double lhs = std::pow(ell0, alpha + 2.0) / (nu * nu * Gr);
                            if (!(lhs <= 1.0 / grid.K + 1e-15))
                                record("(iv)", ell0, nu, fl2, alpha, lhs, 1.0 / grid.K);
                        }
                    }
                }
            }
        }
    }
    return result;
}

nlohmann::ordered_json to_json(const BoundReport& report) {
    nlohmann::ordered_json j;
    j["regime"] = report.regime;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json je;
        je["name"] = e.name;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
        je["satisfied"] = e.satisfied;
        je["margin"] = e.margin;
        je["note"] = e.note;
        j["entries"].push_back(je);
    }
    j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.inputs) j["inputs"][k] = v;
    return j;
}

BoundReport report_from_json(const nlohmann::ordered_json& j) {
    BoundReport r;
    r.regime = j.at("regime").get<std::string>();
    for (const auto& je : j.at("entries")) {
        BoundEntry e;
        e.name = je.at("name").get<std::string>();
        e.lhs = je.at("lhs").get<double>();
        e.rhs = je.at("rhs").get<double>();
        e.satisfied = je.at("satisfied").get<bool>();
        e.margin = je.at("margin").get<double>();
        e.note = je.at("note").get<std::string>();
        r.entries.push_back(std::move(e));
    }
    for (const auto& [k, v] : j.at("inputs").items()) r.inputs[k] = v.get<double>();
    return r;
}

bool reverify(const BoundReport& report) {
    auto in = [&](const char* key) {
        auto it = report.inputs.find(key);
        if (it == report.inputs.end())
            throw std::invalid_argument(std::string("reverify: report lacks input '") + key + "'");
        return it->second;
    };

    std::vector<BoundEntry> fresh;
    if (report.regime == "classical" || report.regime == "stokes" ||
        report.regime == "small_grashof") {
        fresh = check_main_law(in("U"), in("E"), in("ell0"), in("nu"), in("Gr"));
        auto chain = check_lemma_chain(in("F"), in("U"), in("ell0"), in("alpha"));
        fresh.insert(fresh.end(), chain.begin(), chain.end());
    } else if (report.regime == "fractional") {
        fresh = check_fractional_law(in("U"), in("E"), in("ell0"), in("nu"), in("Gr"), in("alpha"));
        auto chain = check_lemma_chain(in("F"), in("U"), in("ell0"), in("alpha"));
        fresh.insert(fresh.end(), chain.begin(), chain.end());
    } else if (report.regime == "appendix_c") {
        fresh = check_appendix_c(in("U"), in("E"), in("F"), in("ell0"), in("nu"), in("Gr"),
                                 in("Re"), in("c_const"));
    } else {
        throw std::invalid_argument("reverify: unknown regime '" + report.regime + "'");
    }

    // Entries beyond the recomputed prefix (regime-specific extras) are
    // compared by name when present in both.
    for (const auto& e : report.entries) {
        bool matched = false;
        for (const auto& f : fresh) {
            if (f.name != e.name) continue;
            matched = true;
            if (!(f.lhs == e.lhs && f.rhs == e.rhs && f.satisfied == e.satisfied &&
                  f.margin == e.margin))
                return false;
        }
        (void)matched;  // extra informational entries are allowed
    }
    // Every recomputed entry must exist in the report.
    for (const auto& f : fresh) {
        bool found = false;
        for (const auto& e : report.entries)
            if (e.name == f.name) found = true;
        if (!found) return false;
    }
    return true;
}

}  // namespace kolmo
