#pragma once

/**
 * @file asymptotics.hpp
 * @brief Closed-form main terms and bounds for b(m,n), f near and away from
 *        q = 1, and the three g-integrals that split the near-pole integral.
 *
 * Notation: beta = pi sqrt(2/n), eps = beta (1 + i x |m|^(-1/3)), tau = i eps / 2pi.
 * Large magnitudes are carried as logarithms; (-1)^(1/2) is taken to be +i.
 */

#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "etq/f_eval.hpp"
#include "etq/quadrature.hpp"
#include "etq/specfun.hpp"

namespace etq {

struct MajorArcPoint {
    long n = 1;
    int m = 1;
    double beta = 0;
    double x = 0;
    cplx eps;
    cplx tau;

    bool major() const { return std::abs(x) <= 1.0; }
    double x_max() const { return M_PI * std::cbrt(double(std::abs(m))) / beta; }
};

/// radius_scale s moves the circle to |q| = e^{-s beta}: eps = s beta + i beta x |m|^(-1/3).
inline MajorArcPoint major_arc_point(long n, int m, double x, double radius_scale = 1.0) {
    if (n < 1) throw std::invalid_argument("major_arc_point: n must be positive");
    if (m == 0) throw std::invalid_argument("major_arc_point: m must be nonzero");
    MajorArcPoint p;
    p.n = n;
    p.m = m;
    p.beta = M_PI * std::sqrt(2.0 / n);
    p.x = x;
    p.eps = cplx(radius_scale * p.beta, p.beta * x / std::cbrt(double(std::abs(m))));
    p.tau = cplx(0, 1) * p.eps / (2 * M_PI);
    return p;
}

struct AsymptoticEstimate {
    double log_abs = 0;  // log |main|
    double phase = 0;    // arg main
    double log_error = -INFINITY;
    bool valid = true;
    std::string validity;

    cplx value() const {
        if (log_abs > 709) throw Overflow("AsymptoticEstimate: value not representable");
        return std::polar(std::exp(log_abs), phase);
    }
    /// Im(v) / Im(main) for a value given as log|v| and sign of its imaginary part.
    double imag_ratio(double log_abs_v, int sign_v) const {
        return sign_v * std::exp(log_abs_v - log_abs) / std::sin(phase);
    }
};

/// (-1)^(k + 1/2) = i (-1)^k as a phase.
inline double half_odd_phase(long k) { return (k % 2 == 0) ? M_PI / 2 : -M_PI / 2; }

/// (-1)^(m+delta+1/2) beta^5 / (2^7 pi^5 (2n)^(1/4)) e^{2 pi sqrt(2n)}, delta = [m < 0].
inline AsymptoticEstimate theorem1_main(int m, long n) {
    if (n < 1) throw std::invalid_argument("theorem1_main: n must be positive");
    const double beta = M_PI * std::sqrt(2.0 / n);
    AsymptoticEstimate a;
    a.log_abs = 5 * std::log(beta) - 7 * std::log(2.0) - 5 * std::log(M_PI) - 0.25 * std::log(2.0 * n) +
                2 * M_PI * std::sqrt(2.0 * n);
    const int delta = m < 0 ? 1 : 0;
    a.phase = half_odd_phase(std::abs(m) + delta);
    a.log_error = -3.25 * std::log(double(n)) + 2 * M_PI * std::sqrt(2.0 * n);
    const double range = std::log(double(n)) / (6 * beta);
    if (m == 0) {
        a.valid = false;
        a.validity = "m = 0 lies outside the statement (b(0,n) = 0)";
    } else if (std::abs(m) > range) {
        a.valid = false;
        a.validity = "|m| exceeds log(n)/(6 beta) = " + std::to_string(range);
    } else {
        a.validity = "|m| <= log(n)/(6 beta) = " + std::to_string(range);
    }
    return a;
}

// ---- fixed z ----

inline double fixed_z_log_asymptotic(long h, long k, long n) {
    if (!(h > 0 && 2 * h < k) || std::gcd(h, k) != 1)
        throw std::invalid_argument("fixed_z_asymptotic: need gcd(h,k) = 1 and 0 < h < k/2");
    const double r = double(h) / k;
    return 1.75 * std::log(r) - std::log(2 * std::sqrt(2.0) * M_PI) - 2.25 * std::log(double(n)) +
           4 * M_PI * std::sqrt(r * n);
}

/// (h/k)^(7/4) / (2 sqrt2 pi) n^(-9/4) e^{4 pi sqrt(hn/k)}
inline double fixed_z_asymptotic(long h, long k, long n) { return std::exp(fixed_z_log_asymptotic(h, k, n)); }

using mp_real = boost::multiprecision::mpfr_float_100;

/// Coefficients a(0..N) of f(h/k; tau) = -8 sin^4(pi z)/sin(2 pi z) * P_c1^4 / (E^6 P_c2)
/// with P_c = prod (1 - 2c q^n + q^2n), c1 = cos 2 pi z, c2 = cos 4 pi z, in 100-digit arithmetic.
inline std::vector<mp_real> fixed_z_coefficients(long h, long k, int N) {
    using V = std::vector<mp_real>;
    const mp_real pi = boost::math::constants::pi<mp_real>();
    const mp_real z = mp_real(h) / k;
    auto prod_c = [&](const mp_real& c) {
        V p(N + 1);
        p[0] = 1;
        const mp_real c2 = 2 * c;
        for (int n = 1; n <= N; ++n)
            for (int i = N; i >= n; --i) {
                p[i] -= c2 * p[i - n];
                if (i >= 2 * n) p[i] += p[i - 2 * n];
            }
        return p;
    };
    auto mul = [&](const V& a, const V& b) {
        V r(N + 1);
        for (int i = 0; i <= N; ++i)
            if (a[i] != 0)
                for (int j = 0; i + j <= N; ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    V p1 = prod_c(cos(2 * pi * z)), p2 = prod_c(cos(4 * pi * z));
    V p12 = mul(p1, p1);
    V num = mul(p12, p12);
    // divide by P_c2 (unit constant term)
    V quo(N + 1);
    for (int i = 0; i <= N; ++i) {
        mp_real s = num[i];
        for (int j = 1; j <= i; ++j) s -= p2[j] * quo[i - j];
        quo[i] = s;
    }
    // divide by E^6 one Euler factor pass at a time: 1/(q;q) via the pentagonal recurrence
    for (int t = 0; t < 6; ++t) {
        V r(N + 1);
        for (int i = 0; i <= N; ++i) {
            mp_real s = quo[i];
            for (long j = 1;; ++j) {
                const long g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
                if (g1 > i) break;
                const int sg = (j % 2) ? 1 : -1;
                s += sg * r[i - g1];
                if (g2 <= i) s += sg * r[i - g2];
            }
            r[i] = s;
        }
        quo.swap(r);
    }
    const mp_real s = sin(pi * z);
    const mp_real pre = -8 * s * s * s * s / sin(2 * pi * z);
    for (auto& v : quo) v *= pre;
    return quo;
}

// ---- near the pole ----

namespace detail {
inline cplx log1m_exp(cplx x) { return std::log(-expm1c(-x)); }  // log(1 - e^-x)
}  // namespace detail

/// log of -(eps^3/pi^3) sinh(2 pi^2 z/eps)^4 / sinh(4 pi^2 z/eps), using
/// sinh(a)^4/sinh(2a) = e^{2a} (1 - e^{-2a})^4 / (8 (1 - e^{-4a})).
inline cplx f_dominant_log(double z, cplx eps) {
    const cplx a = 2 * M_PI * M_PI * z / eps;
    return std::log(-std::pow(eps / M_PI, 3)) + 2.0 * a + 4.0 * detail::log1m_exp(2.0 * a) - std::log(8.0) -
           detail::log1m_exp(4.0 * a);
}

inline cplx f_dominant_approx(double z, cplx eps) {
    if (!(z > 0 && z < 0.5)) throw std::invalid_argument("f_dominant_approx: z must lie in (0, 1/2)");
    const cplx l = f_dominant_log(z, eps);
    if (l.real() > 709) throw Overflow("f_dominant_approx: value not representable");
    return std::exp(l);
}

/// 1 + e^{-4 pi^2 Re(1/eps) (1 - 2z)}
inline double f_dominant_correction(double z, cplx eps) {
    return 1.0 + std::exp(-4 * M_PI * M_PI * (1.0 / eps).real() * (1 - 2 * z));
}

/// For z in (1/2, 1), f(z) = -f(1 - z).
inline cplx f_dominant_approx_reflected(double z, cplx eps) { return -f_dominant_approx(1 - z, eps); }

/// log of the product factor Pi(z) = f / f_dominant obtained from the modular transformation:
/// prod (1-e^{c(z-n)})^4 (1-e^{c(-z-n)})^4 / [(1-e^{-cn})^6 (1-e^{c(2z-n)}) (1-e^{c(-2z-n)})], c = 4 pi^2/eps.
/// `skip_pole` drops the n = 1 factor 1/(1 - e^{c(2z-1)}), which carries the pole at z = 1/2.
template <class T, class R>
T modular_product_log(R z, T eps, bool skip_pole = false) {
    using std::abs;
    using std::exp;
    using std::log;
    const R pi = boost::math::constants::pi<R>();
    const T c = 4 * pi * pi / eps;
    auto l1m = [](const T& e) {  // log(1 - exp(e)) for Re e < 0
        T x = exp(e);
        if (abs(x) < R(1e-3)) return T(-(x + x * x / R(2) + x * x * x / R(3) + x * x * x * x / R(4)));
        return T(log(T(R(1)) - x));
    };
    T s(0);
    for (int n = 1;; ++n) {
        T t = R(4) * l1m(c * (z - R(n))) + R(4) * l1m(c * (-z - R(n))) - R(6) * l1m(-c * R(n)) -
              l1m(c * (-2 * z - R(n)));
        if (!(skip_pole && n == 1)) t -= l1m(c * (2 * z - R(n)));
        s += t;
        if (n > 1 && abs(t) < std::numeric_limits<R>::epsilon() * (R(1) + abs(s))) break;
        if (n > 100000) throw NotConverged("modular_product_log: no convergence");
    }
    return s;
}

/// f(z; i eps/2pi) through the modular form; accurate for small Re(eps) where q-products are slow.
inline cplx f_exact_modular(double z, cplx eps) {
    const cplx l = f_dominant_log(z, eps) + modular_product_log(z, eps);
    if (l.real() > 709) throw Overflow("f_exact_modular: value not representable");
    return std::exp(l);
}

/// Dominant-pole deviation for real eps in extended precision.
struct DominantDeviation {
    double log_deviation;      // log |f/f_dom - 1 - e^{-4 pi^2 (1-2z)/eps}|
    double log_lemma_scale;    // -4 pi^2 Re(1/eps) (1 - z)
    double log_second_order;   // -8 pi^2 Re(1/eps) (1 - 2z)
};

inline DominantDeviation dominant_deviation(double z, double eps) {
    using R = extended_real;
    const R pi = boost::math::constants::pi<R>();
    const R Z(z), Ep(eps);
    const R x = exp(-4 * pi * pi * (1 - 2 * Z) / Ep);
    // Pi = exp(rest) / (1 - x); deviation = (x^2 + expm1(rest)) / (1 - x)
    const R rest = modular_product_log(Z, Ep, true);
    const R dev = (x * x + boost::multiprecision::expm1(rest)) / (1 - x);
    DominantDeviation d;
    d.log_deviation = static_cast<double>(log(abs(dev)));
    d.log_lemma_scale = -4 * M_PI * M_PI / eps * (1 - z);
    d.log_second_order = -8 * M_PI * M_PI / eps * (1 - 2 * z);
    return d;
}

/// log of eps^4 e^{2 pi^2/eps} / (2^6 pi^4).
inline cplx residue_asymptotic_log(cplx eps) {
    return 4.0 * std::log(eps) - 6 * std::log(2.0) - 4 * std::log(M_PI) + 2 * M_PI * M_PI / eps;
}

inline cplx residue_asymptotic(cplx eps) {
    const cplx l = residue_asymptotic_log(eps);
    if (l.real() > 709) throw Overflow("residue_asymptotic: value not representable");
    return std::exp(l);
}

/// (-1)^(m+1/2) eps^4 e^{2 pi^2/eps} / (2^6 pi^4), error scale beta^3.
inline AsymptoticEstimate fm_major_approx(const MajorArcPoint& p) {
    AsymptoticEstimate a;
    const cplx l = residue_asymptotic_log(p.eps);
    a.log_abs = l.real();
    a.phase = std::remainder(l.imag() + half_odd_phase(std::abs(p.m)), 2 * M_PI);
    a.log_error = 3 * std::log(p.beta);
    a.valid = p.major();
    a.validity = p.major() ? "|x| <= 1" : "x outside the major arc";
    return a;
}

/// g_{m,1}, g_{m,2}, g_{m,3} over [0, 1/2] with continuous extension at z = 1/2.
inline cplx g_integral(const MajorArcPoint& p, int which, const QuadOptions& opt = {}) {
    const int m = std::abs(p.m);
    const cplx eps = p.eps;
    const double Rinv = (1.0 / eps).real();
    const double sgn = (m % 2) ? 1.0 : -1.0;  // (-1)^(m+1)
    std::function<cplx(double)> f;
    if (which == 1) {
        f = [&](double z) {
            if (z <= 0) return cplx(0);
            return std::exp(f_dominant_log(z, eps)) * std::sin(2 * M_PI * m * z);
        };
    } else if (which == 2) {
        f = [&](double z) {
            if (z <= 0) return cplx(0);
            return std::exp(f_dominant_log(z, eps) - 4 * M_PI * M_PI * Rinv * (1 - 2 * z)) * std::sin(2 * M_PI * m * z);
        };
    } else if (which == 3) {
        f = [&](double z) {
            if (z <= 0) return cplx(0);
            const double w = 0.5 - z;
            // sin(2 pi m z) / (1 - e^{-8 pi^2 w/eps}), limit (-1)^(m+1) m eps / (4 pi) at w = 0
            cplx S;
            if (w < 1e-9)
                S = sgn * double(m) * eps / (4 * M_PI);
            else
                S = sgn * std::sin(2 * M_PI * m * w) / (-expm1c(-8 * M_PI * M_PI * w / eps));
            const cplx pit = std::exp(modular_product_log(z, eps, true));
            const cplx lead = std::exp(f_dominant_log(z, eps));
            return lead * (pit * S - f_dominant_correction(z, eps) * std::sin(2 * M_PI * m * z));
        };
    } else {
        throw std::invalid_argument("g_integral: which must be 1, 2 or 3");
    }
    QuadOptions o = opt;
    o.initial_panels = std::max(o.initial_panels, 8);
    return integrate(f, 0.0, 0.5, o).value;
}

// ---- away from the pole ----

/// log of n^(-1/4) exp[(2pi/beta)(pi/12 - (1/2pi)(1 - 1/sqrt(1 + m^(-2/3))))]
inline double p_q_bound(long n, int m, double x) {
    const double beta = M_PI * std::sqrt(2.0 / n);
    if (!(x >= 1 && x <= M_PI * std::cbrt(double(m)) / beta + 1e-12))
        throw std::invalid_argument("p_q_bound: x outside [1, pi m^(1/3)/beta]");
    const double t = 1 - 1 / std::sqrt(1 + std::pow(double(m), -2.0 / 3));
    return -0.25 * std::log(double(n)) + (2 * M_PI / beta) * (M_PI / 12 - t / (2 * M_PI));
}

/// log |P(q)| at the point eps = beta(1 + i x m^(-1/3)).
inline double p_q_log_numeric(long n, int m, double x) {
    return std::log(std::abs(partition_gf_numeric(major_arc_point(n, m, x).tau)));
}

/// log of n^(-2) exp[pi sqrt(2n) - (8 sqrt(2n)/pi)(1 - 1/sqrt(1 + m^(-2/3)))]
inline double f_away_bound(long n, int m) {
    if (m < 1) throw std::invalid_argument("f_away_bound: m must be positive");
    const double t = 1 - 1 / std::sqrt(1 + std::pow(double(m), -2.0 / 3));
    return -2 * std::log(double(n)) + M_PI * std::sqrt(2.0 * n) - 8 * std::sqrt(2.0 * n) / M_PI * t;
}

}  // namespace etq
