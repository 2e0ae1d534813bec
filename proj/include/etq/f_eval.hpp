#pragma once

/**
 * @file f_eval.hpp
 * @brief Floating-point evaluation of f(z;tau), eta quotients and P(q).
 *
 * With E = (q;q)_inf and Q(w) = prod_{n>=1} (1 - w q^n)(1 - q^n / w),
 *
 *   theta(z) = -2 sin(pi z) q^(1/8) E Q(zeta),
 *   f(z)     = -8 sin^4(pi z) / sin(2 pi z) * Q(zeta)^4 / (E^6 Q(zeta^2)).
 *
 * Every factor is a product of terms of modulus close to 1, so there is no
 * cancellation even when |q| is close to 1. Products are cut once |q|^n drops
 * below 1e-18.
 */

#include <cmath>
#include <complex>

#include "etq/errors.hpp"

namespace etq {

using cplx = std::complex<double>;

constexpr long kMaxProductTerms = 2000000;

/// Number of product factors so that |q|^N < 1e-18.
inline long product_terms(cplx q) {
    const double aq = std::abs(q);
    if (!(aq < 1.0)) throw NotConverged("product_terms: |q| >= 1");
    const long N = static_cast<long>(std::ceil(std::log(1e-18) / std::log(aq))) + 1;
    if (N > kMaxProductTerms) throw InsufficientTruncation("product_terms: |q| too close to 1");
    return std::max(N, 1L);
}

inline cplx q_of_tau(cplx tau) { return std::exp(cplx(0, 2 * M_PI) * tau); }

/// -expm1 free helper: e^x - 1 for complex x, accurate near 0.
inline cplx expm1c(cplx x) {
    if (std::abs(x) < 1e-5) return x * (1.0 + x * (0.5 + x / 6.0));
    return std::exp(x) - 1.0;
}

/// Precomputed data at a fixed tau for repeated evaluation in z.
class FEvaluator {
public:
    explicit FEvaluator(cplx tau) : tau_(tau), q_(q_of_tau(tau)), N_(product_terms(q_)) {
        cplx e = 1, qn = 1;
        for (long n = 1; n <= N_; ++n) {
            qn *= q_;
            e *= 1.0 - qn;
        }
        E_ = e;
    }

    cplx tau() const { return tau_; }
    cplx q() const { return q_; }
    long terms() const { return N_; }
    cplx euler() const { return E_; }

    /// prod (1 - w q^n)(1 - q^n / w)
    cplx Q(cplx w) const {
        cplx p = 1, qn = 1;
        const cplx wi = 1.0 / w;
        for (long n = 1; n <= N_; ++n) {
            qn *= q_;
            p *= (1.0 - w * qn) * (1.0 - wi * qn);
        }
        return p;
    }

    /// prod (1 - 2c q^n + q^2n), the real-z form of Q.
    cplx Qc(double c) const {
        cplx p = 1, qn = 1;
        for (long n = 1; n <= N_; ++n) {
            qn *= q_;
            p *= 1.0 - 2.0 * c * qn + qn * qn;
        }
        return p;
    }

    /// f(z) for complex z away from the poles.
    cplx f(cplx z) const {
        const cplx zeta = std::exp(cplx(0, 2 * M_PI) * z);
        const cplx s = std::sin(M_PI * z);
        const cplx s4 = s * s * s * s;
        const cplx e6 = std::pow(E_, 6);
        const cplx qz = Q(zeta);
        return -8.0 * s4 / std::sin(2 * M_PI * z) * (qz * qz * qz * qz) / (e6 * Q(zeta * zeta));
    }

    /// f(z) sin(2 pi m z) for real z in [0, 1/2], extended continuously to z = 1/2.
    cplx f_sin(double z, int m) const {
        const double s = std::sin(M_PI * z);
        const double w = 0.5 - z;
        // sin(2 pi m z)/sin(2 pi z) = -(-1)^m sin(2 pi m w)/sin(2 pi w) with w = 1/2 - z
        double ratio;
        if (std::abs(w) < 1e-7) {
            ratio = -(m % 2 ? -1.0 : 1.0) * m;
        } else if (w < 0.25) {
            ratio = -(m % 2 ? -1.0 : 1.0) * std::sin(2 * M_PI * m * w) / std::sin(2 * M_PI * w);
        } else {
            ratio = std::sin(2 * M_PI * m * z) / std::sin(2 * M_PI * z);
        }
        const cplx p1 = Qc(std::cos(2 * M_PI * z)), p2 = Qc(std::cos(4 * M_PI * z));
        return -8.0 * (s * s * s * s) * ratio * (p1 * p1 * p1 * p1) / (std::pow(E_, 6) * p2);
    }

private:
    cplx tau_, q_;
    long N_;
    cplx E_;
};

/// eta(tau) from the product, including q^(1/24).
inline cplx eta_numeric(cplx tau) {
    FEvaluator ev(tau);
    return std::exp(cplx(0, 2 * M_PI / 24) * tau) * ev.euler();
}

/// eta(2 tau)^8 / eta(tau)^16 through the two eta products.
inline cplx residue_quotient_numeric(cplx tau) {
    const cplx a = eta_numeric(2.0 * tau), b = eta_numeric(tau);
    return std::pow(a, 8) / std::pow(b, 16);
}

/// The same quotient as prod (1 + q^n)^8 / (1 - q^n)^8, a second independent path.
inline cplx residue_quotient_overpartition(cplx tau) {
    const cplx q = q_of_tau(tau);
    const long N = product_terms(q);
    cplx p = 1, qn = 1;
    for (long n = 1; n <= N; ++n) {
        qn *= q;
        p *= (1.0 + qn) / (1.0 - qn);
    }
    return std::pow(p, 8);
}

/// P(q) = 1/(q;q)_inf.
inline cplx partition_gf_numeric(cplx tau) { return 1.0 / FEvaluator(tau).euler(); }

}  // namespace etq
