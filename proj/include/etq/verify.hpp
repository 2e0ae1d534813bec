#pragma once

/**
 * @file verify.hpp
 * @brief Lemma-level check suites behind `etq verify` and the acceptance run.
 *
 * Bounds that hold only up to an unspecified constant are checked in two passes:
 * the constant is measured on a calibration grid, widened by a factor 10 and
 * frozen, then asserted on a disjoint grid further along the limit. A bound
 * whose hidden constant actually grows fails the second pass.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "etq/asymptotics.hpp"
#include "etq/circle_method.hpp"
#include "etq/specfun.hpp"

namespace etq {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace verify_detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

/// Log-scale excess of a measured quantity over its claimed scale.
struct Sample {
    std::string where;
    double excess;
};

/// Freeze log C = max(calibration) + log 10 and require every assertion sample to stay below it.
inline SuiteResult calibrated(std::string name, const std::vector<Sample>& calib, const std::vector<Sample>& assert_) {
    SuiteResult r{std::move(name), true, ""};
    double c = -INFINITY;
    for (const auto& s : calib) c = std::max(c, s.excess);
    const double frozen = c + std::log(10.0);
    double worst = -INFINITY;
    std::string worst_at;
    for (const auto& s : assert_) {
        if (!std::isfinite(s.excess) && !(s.excess < 0)) {
            r.pass = false;
            worst_at = s.where + " (non-finite)";
            break;
        }
        if (s.excess > worst) {
            worst = s.excess;
            worst_at = s.where;
        }
        if (s.excess > frozen) r.pass = false;
    }
    r.detail = "frozen_log_C=" + fmt(frozen) + " worst_log_excess=" + fmt(worst) + " at " + worst_at;
    return r;
}

}  // namespace verify_detail

// ---- special functions ----

inline SuiteResult suite_euler_integral() {
    double worst = 0;
    bool ok = script_E(0) == mpq_class(1, 4);
    for (int j = 0; j <= 5; ++j) {
        auto f = [j](double w) {
            if (w == 0) return j == 0 ? 1 / M_PI : 0.0;
            return std::pow(w, 2 * j + 1) / std::sinh(M_PI * w);
        };
        const double q = integrate_to_infinity(f, 0.0, 1.0).value;
        const double want = script_E(j).get_d();
        worst = std::max(worst, std::abs(q - want) / std::max(1.0, std::abs(want)));
    }
    ok = ok && worst <= 1e-10;
    return {"euler-integral", ok, "max_err=" + verify_detail::fmt(worst) + " tol=1e-10"};
}

inline SuiteResult suite_sech_expansion() {
    const double r = sech_expansion_check(0.9, 20);
    return {"sech-expansion", r <= 1e-10, "residual(t=0.9,20 terms)=" + verify_detail::fmt(r) + " tol=1e-10"};
}

inline SuiteResult suite_bessel_series() {
    bool ok = true;
    double worst = 0;
    for (double x : {1.0, 10.0, 100.0}) {
        const auto a = bessel_i(5, x), b = bessel_i(-5, x);
        ok = ok && a.log_value == b.log_value && a.scaled == b.scaled;
        worst = std::max(worst, std::abs(a.scaled / bessel_i_integral_scaled(5, x) - 1));
    }
    ok = ok && worst <= 1e-9;
    return {"bessel-series", ok, "I_-5 == I_5, max series/integral deviation=" + verify_detail::fmt(worst) + " tol=1e-9"};
}

inline SuiteResult suite_bessel_main_term() {
    auto dev = [](int l, double x) { return std::abs(bessel_i(l, x).scaled / bessel_i_main_term_scaled(l, x) - 1); };
    const double d100 = dev(5, 100.0), d1000 = dev(5, 1000.0);
    bool ok = d100 <= 0.15 && d1000 <= 0.015;
    double worst = 0;  // against (4l^2+1)/(4x) for x >= 10 l^2
    for (int l = 0; l <= 6; ++l)
        for (double x = std::max(1.0, 10.0 * l * l); x < 1e4; x *= 1.7) {
            const double r = dev(l, x) / ((4.0 * l * l + 1) / (4 * x));
            worst = std::max(worst, r);
        }
    ok = ok && worst <= 1;
    return {"bessel-main-term", ok,
            "dev(x=100)=" + verify_detail::fmt(d100) + " dev(x=1000)=" + verify_detail::fmt(d1000) +
                " max dev/((4l^2+1)/4x)=" + verify_detail::fmt(worst)};
}

/// |P_4 - I_{-5}(2A)| against exp(A (1 + 1/(1 + m^(-2/3)))), in extended precision.
inline SuiteResult suite_ps_scaling() {
    using R = extended_real;
    std::vector<double> logc;
    std::string detail;
    for (auto [n, m] : std::vector<std::pair<long, long>>{{100, 2}, {400, 3}, {900, 5}}) {
        const R A = boost::math::constants::pi<R>() * sqrt(R(2 * n));
        QuadOptions o;
        o.rel_tol = 1e-30;
        o.abs_floor = 0;
        const R p = p_s_integral_scaled<R>(4, n, m, o);
        const R i5 = bessel_i<R>(-5, 2 * A).scaled;
        const R mu2 = 1 / pow(R(m), R(2) / 3);
        const double c = static_cast<double>(log(abs(p - i5)) - (A * (1 + 1 / (1 + mu2)) - 2 * A));
        logc.push_back(c);
        detail += "(" + std::to_string(n) + "," + std::to_string(m) + "):log_C=" + verify_detail::fmt(c) + " ";
    }
    // frozen constant: log C < 2, and no drift beyond a factor 100 across the grid
    const bool ok = *std::max_element(logc.begin(), logc.end()) < 2.0 && logc.back() - logc.front() < std::log(100.0);
    return {"ps-scaling", ok, detail + "frozen log_C<2"};
}

// ---- near the pole ----

/// |f/f_dom - 1 - e^{-4 pi^2 (1-2z)/eps}| against e^{-4 pi^2 (1-z)/eps} for z in [0.1, z_max].
inline SuiteResult suite_dominant_pole(double z_max = 0.4) {
    using verify_detail::Sample;
    auto sample = [](double z, double inv_eps) {
        const DominantDeviation d = dominant_deviation(z, 1 / inv_eps);
        return Sample{"z=" + verify_detail::fmt(z) + ",1/eps=" + verify_detail::fmt(inv_eps),
                      d.log_deviation - d.log_lemma_scale};
    };
    std::vector<Sample> calib, check;
    for (double z : {0.1, 0.2, 0.3, 0.4})
        if (z <= z_max + 1e-12)
            for (double ie : {20.0, 30.0}) calib.push_back(sample(z, ie));
    for (double z : {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4})
        if (z <= z_max + 1e-12)
            for (double ie : {60.0, 100.0}) check.push_back(sample(z, ie));
    return verify_detail::calibrated(z_max < 0.4 ? "dominant-pole(z<=" + verify_detail::fmt(z_max) + ")" : "dominant-pole",
                                     calib, check);
}

/// 4 eta(2tau)^8/eta(tau)^16 against eps^4 e^{2 pi^2/eps}/(2^6 pi^4), relative error e^{-2 pi^2/eps}.
inline SuiteResult suite_residue_lemma() {
    using verify_detail::Sample;
    auto sample = [](double eps) {
        const cplx tau(0, eps / (2 * M_PI));
        const cplx exact = 4.0 * residue_quotient_numeric(tau);
        const double rel = std::abs(exact / residue_asymptotic(eps) - 1.0);
        return Sample{"eps=" + verify_detail::fmt(eps), std::log(rel) + 2 * M_PI * M_PI / eps};
    };
    std::vector<Sample> calib, check;
    for (double e : {4.0, 3.0}) calib.push_back(sample(e));
    for (double e : {2.0, 1.5, 1.2}) check.push_back(sample(e));
    return verify_detail::calibrated("residue-lemma", calib, check);
}

/// g_{m,1}/beta^4, g_{m,2}/g_{m,1} and g_{m,3} pi^3/eps^3 on the major arc.
inline std::vector<SuiteResult> suite_g_bounds() {
    using verify_detail::Sample;
    struct Row {
        std::string at;
        double r1, r2, r3;
    };
    auto row = [](long n, int m, double x) {
        const MajorArcPoint p = major_arc_point(n, m, x);
        QuadOptions o;
        o.rel_tol = 1e-8;
        const cplx g1 = g_integral(p, 1, o), g2 = g_integral(p, 2, o), g3 = g_integral(p, 3, o);
        return Row{"n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",x=" + verify_detail::fmt(x),
                   std::log(std::abs(g1)) - 4 * std::log(p.beta), std::log(std::abs(g2 / g1)),
                   std::log(std::abs(g3)) + 3 * std::log(M_PI) - 3 * std::log(std::abs(p.eps))};
    };
    std::vector<Row> calib, check;
    for (long n : {100L, 150L})
        for (int m : {1, 2})
            for (double x : {0.0, 1.0}) calib.push_back(row(n, m, x));
    for (long n : {400L, 800L})
        for (int m : {1, 2})
            for (double x : {0.0, 0.5, 1.0}) check.push_back(row(n, m, x));
    std::vector<SuiteResult> out;
    const char* names[3] = {"g1-over-beta4", "g2-over-g1", "g3-times-pi3-over-eps3"};
    for (int k = 0; k < 3; ++k) {
        std::vector<Sample> a, b;
        for (const auto& r : calib) a.push_back({r.at, k == 0 ? r.r1 : k == 1 ? r.r2 : r.r3});
        for (const auto& r : check) b.push_back({r.at, k == 0 ? r.r1 : k == 1 ? r.r2 : r.r3});
        out.push_back(verify_detail::calibrated(names[k], a, b));
    }
    return out;
}

// ---- away from the pole ----

inline std::vector<double> error_arc_grid(long n, int m, int points) {
    const double X = major_arc_point(n, m, 0).x_max();
    std::vector<double> xs;
    for (int i = 0; i < points; ++i) xs.push_back(1 + (X - 1) * i / (points - 1));
    return xs;
}

inline SuiteResult suite_pq_bound() {
    using verify_detail::Sample;
    auto samples = [](long n) {
        std::vector<Sample> s;
        for (int m : {1, 3})
            for (double x : error_arc_grid(n, m, 9))
                s.push_back({"n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",x=" + verify_detail::fmt(x),
                             p_q_log_numeric(n, m, x) - p_q_bound(n, m, x)});
        return s;
    };
    std::vector<Sample> check = samples(200), c400 = samples(400);
    check.insert(check.end(), c400.begin(), c400.end());
    return verify_detail::calibrated("pq-bound", samples(100), check);
}

/// |f_m| on the error arc and the residue quotient against the away-from-pole bound.
inline SuiteResult suite_away_bound(const QuadratureSpec& spec = {}) {
    using verify_detail::Sample;
    auto samples = [&](long n) {
        std::vector<Sample> s;
        for (int m : {1, 3}) {
            const double b = f_away_bound(n, m);
            for (double x : error_arc_grid(n, m, 5)) {
                const MajorArcPoint p = major_arc_point(n, m, x);
                const std::string at =
                    "n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",x=" + verify_detail::fmt(x);
                s.push_back({at + " fm", std::log(std::abs(fm_numeric(p.tau, m, spec))) - b});
                s.push_back({at + " eta", std::log(std::abs(residue_quotient_numeric(p.tau))) - b});
            }
        }
        return s;
    };
    std::vector<Sample> check = samples(200), c400 = samples(400);
    check.insert(check.end(), c400.begin(), c400.end());
    return verify_detail::calibrated("away-bound", samples(100), check);
}

struct SuiteEntry {
    std::string name;
    std::function<std::vector<SuiteResult>()> run;
};

inline std::vector<SuiteEntry> all_suites() {
    auto one = [](SuiteResult (*f)()) { return [f] { return std::vector<SuiteResult>{f()}; }; };
    return {
        {"euler-integral", one(suite_euler_integral)},
        {"sech-expansion", one(suite_sech_expansion)},
        {"bessel-series", one(suite_bessel_series)},
        {"bessel-main-term", one(suite_bessel_main_term)},
        {"ps-scaling", one(suite_ps_scaling)},
        {"dominant-pole", [] { return std::vector<SuiteResult>{suite_dominant_pole()}; }},
        {"residue-lemma", one(suite_residue_lemma)},
        {"g-bounds", suite_g_bounds},
        {"pq-bound", one(suite_pq_bound)},
        {"away-bound", [] { return std::vector<SuiteResult>{suite_away_bound()}; }},
    };
}

}  // namespace etq
