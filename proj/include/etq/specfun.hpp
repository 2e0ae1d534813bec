#pragma once

/**
 * @file specfun.hpp
 * @brief Euler polynomials at 0, modified Bessel I of integer order, the upper
 *        incomplete gamma function and the segment integral P_s.
 *
 * Floating-point routines are templated on the real type. `double` callers get
 * long double internally where cancellation would cost digits; `extended_real`
 * (50 decimal digits) is available for the large-n runs.
 */

#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <string>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "etq/errors.hpp"
#include "etq/quadrature.hpp"

namespace etq {

using extended_real = boost::multiprecision::cpp_bin_float_50;

// ---- Euler polynomials ----

/// E_r(0) from (1 + e^t) sum E_r(0) t^r/r! = 2, i.e. 2 E_n(0) + sum_{k<n} C(n,k) E_k(0) = 2 [n = 0].
inline mpq_class euler_value_at_zero(int r) {
    if (r < 0) throw std::invalid_argument("euler_value_at_zero: negative index");
    static std::mutex mu;
    static std::vector<mpq_class> cache{mpq_class(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= r) {
        const int n = static_cast<int>(cache.size());
        mpq_class s = 0;
        mpz_class c = 1;  // C(n, k)
        for (int k = 0; k < n; ++k) {
            s += c * cache[k];
            c = c * (n - k) / (k + 1);
        }
        mpq_class e = -s / 2;
        e.canonicalize();
        cache.push_back(e);
    }
    return cache[r];
}

struct EulerPoly {
    int degree = 0;
    std::vector<mpq_class> coeffs;  // coeffs[i] multiplies x^i

    mpq_class operator()(const mpq_class& x) const {
        mpq_class v = 0;
        for (int i = degree; i >= 0; --i) v = v * x + coeffs[i];
        return v;
    }
};

/// E_r(x) = sum_k C(r,k) E_k(0) x^(r-k), read off from 2e^{xt}/(1+e^t) = e^{xt} * 2/(1+e^t).
inline EulerPoly euler_poly(int r) {
    EulerPoly p;
    p.degree = r;
    p.coeffs.assign(r + 1, 0);
    mpz_class c = 1;
    for (int k = 0; k <= r; ++k) {
        p.coeffs[r - k] = c * euler_value_at_zero(k);
        c = c * (r - k) / (k + 1);
    }
    return p;
}

/// int_0^inf w^(2j+1)/sinh(pi w) dw = (-1)^(j+1) E_(2j+1)(0)/2.
inline mpq_class script_E(int j) {
    mpq_class v = euler_value_at_zero(2 * j + 1) / 2;
    if (j % 2 == 0) v = -v;
    return v;
}

/// |-sech^2(t/2)/2 - sum_{r<terms} E_(2r+1)(0) t^(2r)/(2r)!|.
inline double sech_expansion_check(double t, int terms) {
    if (!(std::abs(t) < M_PI)) throw std::invalid_argument("sech_expansion_check: |t| must be below pi");
    long double s = 0, pw = 1;  // t^(2r)/(2r)!
    for (int r = 0; r < terms; ++r) {
        s += euler_value_at_zero(2 * r + 1).get_d() * pw;
        pw *= static_cast<long double>(t) * t / ((2.0L * r + 1) * (2.0L * r + 2));
    }
    const long double c = std::cosh(static_cast<long double>(t) / 2);
    return static_cast<double>(std::abs(-0.5L / (c * c) - s));
}

// ---- Bessel I ----

template <class Real>
struct BesselEval {
    int order = 0;
    Real x = 0;
    Real log_value = 0;  // log I_order(x)
    Real scaled = 0;     // e^-x I_order(x)
    std::string method = "series";
    Real error_estimate = 0;  // relative

    Real value() const {
        using std::exp;
        if (log_value > Real(std::log(std::numeric_limits<double>::max())) && std::is_floating_point_v<Real>)
            throw Overflow("bessel_i: unscaled value not representable");
        return exp(log_value);
    }
};

namespace detail {
template <class Real>
using work_real = std::conditional_t<std::is_same_v<Real, double>, long double, Real>;
}

/// Ascending series sum_k (x/2)^(2k+l)/(k!(k+l)!), accumulated relative to its largest term.
template <class Real = double>
BesselEval<Real> bessel_i(int l, Real x) {
    using W = detail::work_real<Real>;
    using std::exp;
    using std::log;
    using std::sqrt;
    if (!(x > 0)) throw std::invalid_argument("bessel_i: x must be positive");
    const int a = l < 0 ? -l : l;
    const W X = W(x), lx = log(X / 2), q = X * X / 4;
    // (k+1)(k+1+a) = x^2/4 at the peak
    W kp = (-(W(a) + 2) + sqrt(W(a) * a + X * X)) / 2;
    long k0 = kp > 0 ? static_cast<long>(kp) : 0;
    const W log_t0 = W(2 * k0 + a) * lx - boost::math::lgamma(W(k0 + 1)) - boost::math::lgamma(W(k0 + a + 1));
    const W eps = std::numeric_limits<W>::epsilon();
    W s = 1, t = 1;
    for (long k = k0 + 1;; ++k) {
        t *= q / (W(k) * W(k + a));
        s += t;
        if (t < eps * s) break;
    }
    t = 1;
    for (long k = k0; k > 0; --k) {
        t *= W(k) * W(k + a) / q;
        s += t;
        if (t < eps * s) break;
    }
    BesselEval<Real> r;
    r.order = l;
    r.x = x;
    r.log_value = Real(log_t0 + log(s));
    r.scaled = Real(exp(log_t0 + log(s) - X));
    r.error_estimate = Real(eps * 8 * (1 + abs(log_t0)));
    return r;
}

/// e^x / sqrt(2 pi x); independent of the order.
template <class Real = double>
Real bessel_i_main_term(int /*l*/, Real x) {
    using std::exp;
    using std::sqrt;
    return exp(x) / sqrt(2 * boost::math::constants::pi<Real>() * x);
}

template <class Real = double>
Real bessel_i_main_term_scaled(int /*l*/, Real x) {
    using std::sqrt;
    return 1 / sqrt(2 * boost::math::constants::pi<Real>() * x);
}

/// Integral representation (1/pi) int_0^pi e^{x (cos t - 1)} cos(l t) dt, scaled by e^-x.
template <class Real = double>
Real bessel_i_integral_scaled(int l, Real x, const QuadOptions& opt = {}) {
    using std::cos;
    using std::exp;
    const Real pi = boost::math::constants::pi<Real>();
    auto f = [&](Real t) { return exp(x * (cos(t) - 1)) * cos(Real(l) * t); };
    QuadOptions o = opt;
    o.initial_panels = std::max(o.initial_panels, 8);
    return integrate(f, Real(0), pi, o).value / pi;
}

// ---- incomplete gamma ----

/// Gamma(alpha; x) = int_x^inf e^-w w^(alpha-1) dw.
template <class Real = double>
Real incomplete_gamma(Real alpha, Real x) {
    if (!(alpha > 0) || !(x > 0)) throw std::invalid_argument("incomplete_gamma: alpha and x must be positive");
    try {
        return boost::math::tgamma(alpha, x);
    } catch (const std::exception& e) {
        throw NotConverged(std::string("incomplete_gamma: ") + e.what());
    }
}

// ---- P_s ----

/// P_s = (1/2 pi i) int_{1 - i mu}^{1 + i mu} v^s e^{A (v + 1/v)} dv with A = pi sqrt(2n), mu = m^(-1/3),
/// returned multiplied by e^{-2A}. The integrand is conjugate-symmetric about y = 0, so
/// P_s = (1/pi) int_0^mu Re[(1+iy)^s e^{A(v + 1/v)}] dy and the result is real.
template <class Real = double>
Real p_s_integral_scaled(int s, long n, long m, const QuadOptions& opt = {}) {
    using std::atan;
    using std::cbrt;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sqrt;
    if (n < 1 || m < 1) throw std::invalid_argument("p_s_integral: n and m must be positive");
    const Real pi = boost::math::constants::pi<Real>();
    const Real A = pi * sqrt(Real(2 * n));
    const Real mu = 1 / cbrt(Real(m));
    auto g = [&](Real y) {
        const Real d = 1 + y * y;
        const Real re = 1 / d - 1;          // Re(v + 1/v) - 2
        const Real im = y * y * y / d;      // Im(v + 1/v)
        const Real mod = Real(s) * log(d) / 2 + A * re;
        return exp(mod) * cos(Real(s) * atan(y) + A * im);
    };
    QuadOptions o = opt;
    o.initial_panels = std::max(o.initial_panels, 8);
    return integrate(g, Real(0), mu, o).value / pi;
}

template <class Real = double>
Real p_s_integral(int s, long n, long m, const QuadOptions& opt = {}) {
    using std::exp;
    using std::sqrt;
    const Real A = boost::math::constants::pi<Real>() * sqrt(Real(2 * n));
    if (std::is_floating_point_v<Real> && 2 * A > Real(std::log(std::numeric_limits<double>::max())))
        throw Overflow("p_s_integral: unscaled value not representable, use p_s_integral_scaled");
    return p_s_integral_scaled<Real>(s, n, m, opt) * exp(2 * A);
}

}  // namespace etq
