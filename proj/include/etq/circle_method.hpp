#pragma once

/**
 * @file circle_method.hpp
 * @brief Numeric Fourier coefficients f_m(tau) and Wright's circle method for b(m,n).
 *
 * f_m is the average of the two paths from 0 to 1 that detour around z = 1/2
 * on a semicircle of radius a, one above and one below:
 *
 *   f_m = -2i int_0^{1/2-a} f sin(2 pi m z) dz + (G_above + G_below)/2.
 *
 * Both semicircles are integrated numerically. `SemicircleMode::closed_form`
 * instead lets a -> 0 in the line integral and adds 4 (-1)^(m+1/2) eta(2tau)^8/eta(tau)^16
 * for the semicircle average.
 */

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "etq/asymptotics.hpp"
#include "etq/f_eval.hpp"
#include "etq/fourier_extract.hpp"
#include "etq/quadrature.hpp"

namespace etq {

enum class SemicircleMode { numeric, closed_form };

struct QuadratureSpec {
    double rel_tol = 1e-9;        // outer (x) tolerance; the z-integrals run 10x tighter
    double abs_floor = 1e-300;
    int max_panels = 20000;
    double semicircle_radius = 0;  // 0 picks min(0.05, |tau|/4)
    SemicircleMode mode = SemicircleMode::numeric;
    std::string z_regularization = "continuous extension of f sin(2 pi m z) at z = 1/2";

    void validate() const {
        if (!(rel_tol > 0) || !(abs_floor >= 0) || max_panels < 1)
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive and the panel budget bounded");
    }
    QuadOptions inner() const {
        QuadOptions o;
        o.rel_tol = rel_tol / 10;
        o.abs_floor = abs_floor;
        o.max_panels = max_panels;
        return o;
    }
};

struct FmResult {
    cplx value;
    cplx line;             // -2i int_0^{1/2-a} f sin
    cplx g_below, g_above; // semicircles (numeric mode)
    cplx line_full;        // -2i int_0^{1/2} f sin, continuous extension (closed_form mode or detail)
    cplx residue_closed;   // 4 (-1)^(m+1/2) eta(2tau)^8/eta(tau)^16
    double radius = 0;
};

namespace detail {

/// The extension at z = 1/2 must agree with a linear extrapolation from nearby samples.
/// Near the pole f sin varies on the scale |tau|/(4 pi), so the step follows it.
inline void check_pole_extension(const FEvaluator& ev, int m) {
    const double h = 1e-3 * std::min(0.1, std::abs(ev.tau()) / (4 * M_PI));
    const cplx lim = ev.f_sin(0.5, m), a = ev.f_sin(0.5 - h, m), b = ev.f_sin(0.5 - 2 * h, m);
    const cplx extrap = 2.0 * a - b;
    const double scale = std::max({std::abs(lim), std::abs(a), std::abs(b)});
    if (std::abs(extrap - lim) > 1e-4 * scale + 1e-300)
        throw PoleDetectionFailure("fm_numeric: continuous extension at z = 1/2 disagrees with nearby samples");
}

inline cplx semicircle(const FEvaluator& ev, int m, double a, bool below, const QuadOptions& o) {
    // z = 1/2 + a e^{i theta}; below: theta from pi to 2 pi, above: theta from pi to 0
    auto g = [&](double th) {
        const cplx e = std::polar(1.0, th);
        const cplx z = 0.5 + a * e;
        return ev.f(z) * std::exp(cplx(0, -2 * M_PI * m) * z) * cplx(0, a) * e;
    };
    QuadOptions oo = o;
    oo.initial_panels = std::max(oo.initial_panels, 4);
    double peak = 0;
    for (int i = 0; i <= 32; ++i) peak = std::max(peak, std::abs(g(M_PI * i / 16)));
    oo.abs_floor = std::max(oo.abs_floor, oo.rel_tol * peak);
    return below ? integrate(g, M_PI, 2 * M_PI, oo).value : -integrate(g, 0.0, M_PI, oo).value;
}

}  // namespace detail

/// f_m(tau) with every piece of the decomposition. `full` computes both modes.
inline FmResult fm_numeric_detail(cplx tau, int m, const QuadratureSpec& spec = {}, bool full = false) {
    spec.validate();
    if (!(tau.imag() > 0)) throw std::invalid_argument("fm_numeric: Im tau must be positive");
    FmResult r;
    if (m == 0) return r;
    if (m < 0) {
        FmResult p = fm_numeric_detail(tau, -m, spec, full);
        for (cplx* v : {&p.value, &p.line, &p.g_below, &p.g_above, &p.line_full, &p.residue_closed}) *v = -*v;
        return p;
    }
    FEvaluator ev(tau);
    detail::check_pole_extension(ev, m);
    // Near q = -1 a pole of f approaches z = 1/4 and the integral cancels heavily, so the
    // target is also floored against the size of the integrand, not only of the result.
    const QuadOptions o = [&] {
        QuadOptions q = spec.inner();
        q.initial_panels = 8;
        double peak = 0;
        for (int i = 0; i <= 64; ++i) peak = std::max(peak, std::abs(ev.f_sin(0.5 * i / 64, m)));
        q.abs_floor = std::max(q.abs_floor, q.rel_tol * 0.5 * peak);
        return q;
    }();
    const cplx mi2(0, -2);
    const bool numeric = spec.mode == SemicircleMode::numeric;
    r.residue_closed = cplx(0, (m % 2) ? -4.0 : 4.0) * residue_quotient_numeric(tau);
    if (numeric || full) {
        r.radius = spec.semicircle_radius > 0 ? spec.semicircle_radius : std::min(0.05, std::abs(tau) / 4);
        r.line = mi2 * integrate([&](double z) { return ev.f_sin(z, m); }, 0.0, 0.5 - r.radius, o).value;
        r.g_below = detail::semicircle(ev, m, r.radius, true, o);
        r.g_above = detail::semicircle(ev, m, r.radius, false, o);
    }
    if (!numeric || full)
        r.line_full = mi2 * integrate([&](double z) { return ev.f_sin(z, m); }, 0.0, 0.5, o).value;
    r.value = numeric ? r.line + (r.g_below + r.g_above) / 2.0 : r.line_full + r.residue_closed;
    return r;
}

inline cplx fm_numeric(cplx tau, int m, const QuadratureSpec& spec = {}) {
    return fm_numeric_detail(tau, m, spec).value;
}

// ---- Wright's circle method ----

struct ArcDecomposition {
    long n = 0;
    int m = 0;
    double log_scale = 0;  // M, E and total are stored divided by e^{log_scale}
    cplx M, E, total;
    double err_M = 0, err_E = 0;  // quadrature error estimates on the same scale
    int panels_M = 0, panels_E = 0;
    double radius_scale = 1;
    std::string report;

    cplx M_value() const { return M * std::exp(log_scale); }
    cplx E_value() const { return E * std::exp(log_scale); }
    cplx total_value() const { return total * std::exp(log_scale); }
};

/// b(m,n) = (beta/(2 pi m^(1/3))) int_{|x| <= pi m^(1/3)/beta} f_m(i eps/2pi) e^{eps n} dx,
/// split into |x| <= 1 (M, boundary included) and the rest (E). The integrand at -x is minus
/// the conjugate of the one at x, so only x >= 0 is integrated.
inline ArcDecomposition wright_coefficient(int m, long n, const QuadratureSpec& spec = {}, double radius_scale = 1.0) {
    spec.validate();
    if (m == 0) throw std::invalid_argument("wright_coefficient: m must be nonzero");
    if (n < 1) throw std::invalid_argument("wright_coefficient: n must be positive");
    if (m < 0) {
        ArcDecomposition a = wright_coefficient(-m, n, spec, radius_scale);
        a.m = m;
        a.M = -a.M;
        a.E = -a.E;
        a.total = -a.total;
        return a;
    }
    const MajorArcPoint p0 = major_arc_point(n, m, 0.0, radius_scale);
    product_terms(q_of_tau(p0.tau));  // throws InsufficientTruncation when the radius is too close to 1
    const double mu = 1 / std::cbrt(double(m));
    const double X = p0.x_max();
    const double phase_rate = p0.beta * mu * n;  // Im(eps n) per unit x

    auto integrand = [&](double x) {
        const MajorArcPoint p = major_arc_point(n, m, x, radius_scale);
        return fm_numeric(p.tau, m, spec) * std::polar(1.0, phase_rate * x);
    };
    QuadOptions o;
    o.rel_tol = spec.rel_tol;
    o.abs_floor = spec.abs_floor;
    o.max_panels = spec.max_panels;
    // enough starting panels to resolve the oscillation of e^{i x phase_rate}
    auto panels_for = [&](double len) { return std::max(2, static_cast<int>(std::ceil(len * phase_rate / M_PI))); };

    ArcDecomposition a;
    a.n = n;
    a.m = m;
    a.radius_scale = radius_scale;
    a.log_scale = radius_scale * p0.beta * n;
    const double pref = p0.beta * mu / (2 * M_PI);
    o.initial_panels = panels_for(1.0);
    auto rm = integrate(integrand, 0.0, 1.0, o);
    a.M = cplx(0, 2 * pref * rm.value.imag());
    a.err_M = 2 * pref * rm.error;
    a.panels_M = rm.panels;
    if (X > 1) {
        o.initial_panels = panels_for(X - 1);
        // E is exponentially smaller than M; its own size sets the tolerance, floored by M's error
        o.abs_floor = std::max(spec.abs_floor, 1e-3 * rm.error);
        auto re = integrate(integrand, 1.0, X, o);
        a.E = cplx(0, 2 * pref * re.value.imag());
        a.err_E = 2 * pref * re.error;
        a.panels_E = re.panels;
    }
    a.total = a.M + a.E;
    std::ostringstream os;
    os << "n=" << n << " m=" << m << " beta=" << p0.beta << " x_max=" << X << " radius_scale=" << radius_scale
       << " panels_M=" << a.panels_M << " panels_E=" << a.panels_E << " boundary x=1 in M";
    a.report = os.str();
    return a;
}

// ---- report ----

struct ConvergenceRow {
    long n;
    int m;
    double exact_im = NAN;        // Im b(m,n), may overflow to inf for very large n; see log form
    double exact_log_abs = NAN;   // log |Im b(m,n)|
    int exact_sign = 0;
    double main_im = NAN;
    double main_log_abs = NAN;
    double ratio = NAN;           // Im b / Im main
    double wright_im = NAN;
    double wright_ratio = NAN;    // wright / exact
};

inline double log_abs_mpq(const mpq_class& v) {
    if (sgn(v) == 0) return -INFINITY;
    long en, ed;
    const double dn = mpz_get_d_2exp(&en, v.get_num_mpz_t());
    const double dd = mpz_get_d_2exp(&ed, v.get_den_mpz_t());
    return std::log(std::abs(dn / dd)) + double(en - ed) * std::log(2.0);
}

/// Rows (n, exact Im b, theorem main, ratio, wright total, wright/exact). Wright runs only
/// for n <= wright_max_n since its cost grows with the oscillation count.
inline std::vector<ConvergenceRow> convergence_report(int m, const std::vector<long>& ns, const CoeffTable& table,
                                                      const QuadratureSpec& spec = {}, long wright_max_n = 50) {
    std::vector<ConvergenceRow> rows;
    for (long n : ns) {
        ConvergenceRow r;
        r.n = n;
        r.m = m;
        const ExactScalar& b = coefficient_query(table, m, static_cast<int>(n));
        r.exact_sign = sgn(b.im());
        r.exact_log_abs = log_abs_mpq(b.im());
        r.exact_im = r.exact_log_abs < 700 ? b.im().get_d() : r.exact_sign * std::exp(r.exact_log_abs);
        if (m != 0) {
            const AsymptoticEstimate t = theorem1_main(m, n);
            r.main_log_abs = t.log_abs;
            r.main_im = std::exp(t.log_abs) * std::sin(t.phase);
            r.ratio = t.imag_ratio(r.exact_log_abs, r.exact_sign);
            if (n <= wright_max_n) {
                const ArcDecomposition w = wright_coefficient(m, n, spec);
                r.wright_im = w.total_value().imag();
                r.wright_ratio = r.wright_im / r.exact_im;
            }
        }
        rows.push_back(r);
    }
    return rows;
}

}  // namespace etq
