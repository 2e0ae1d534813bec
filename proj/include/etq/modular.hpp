#pragma once

/**
 * @file modular.hpp
 * @brief Exact q-expansions of eta, theta, 1/eta and the residue quotient.
 *
 * eta_series and theta_series multiply out their defining products.
 * theta_unit_series uses the triple-product sum instead, which is much
 * cheaper at large order; the test suite checks the two agree.
 */

#include <vector>

#include "etq/int_series.hpp"
#include "etq/qseries.hpp"

namespace etq {

/// prod_{n>=1} (1 - q^n), offset 0.
inline QSeries euler_series(int N) {
    intser::Series s = intser::one(N);
    for (int n = 1; n <= N; ++n)
        for (int k = N; k >= n; --k) s[k] -= s[k - n];
    return QSeries::from_integers(s);
}

/// eta(tau) = q^(1/24) prod (1 - q^n).
inline QSeries eta_series(int N) {
    QSeries e = euler_series(N);
    e.set_offset24(1);
    return e;
}

/// theta(s z; tau) from the product i zeta^(1/2) q^(1/8) prod (1-q^n)(1-zeta q^n)(1-zeta^-1 q^(n-1)).
inline QSeries theta_series(int N, int s = 1) {
    if (s < 1) throw std::invalid_argument("theta_series: s must be positive");
    // c[k][j + k + 1] holds the zeta^j coefficient at q^k of the bare product.
    std::vector<std::vector<mpz_class>> c(N + 1);
    for (int k = 0; k <= N; ++k) c[k].assign(2 * k + 3, 0);
    c[0][1] = 1;
    auto at = [&](int k, int j) -> mpz_class* {
        int idx = j + k + 1;
        return (idx >= 0 && idx < static_cast<int>(c[k].size())) ? &c[k][idx] : nullptr;
    };
    // (1 - zeta^-1) at q^0: new[j] = old[j] - old[j+1], ascending j keeps old[j+1] intact.
    for (int j = -1; j <= 0; ++j) {
        mpz_class* up = at(0, j + 1);
        if (up) *at(0, j) -= *up;
    }
    auto mul_factor = [&](int n, int a) {  // times (1 - zeta^a q^n), n >= 1
        for (int k = N; k >= n; --k)
            for (int j = -(k + 1); j <= k + 1; ++j) {
                mpz_class* src = at(k - n, j - a);
                if (src && sgn(*src) != 0) *at(k, j) -= *src;
            }
    };
    for (int n = 1; n <= N; ++n) {
        mul_factor(n, 0);
        mul_factor(n, 1);
        mul_factor(n, -1);
    }
    QSeries r(N, 3);
    for (int k = 0; k <= N; ++k) {
        ZetaPoly p;
        for (int j = -(k + 1); j <= k + 1; ++j) {
            mpz_class* v = at(k, j);
            if (v && sgn(*v) != 0) p.push_sorted(2 * s * j + s, ExactScalar::imag(mpq_class(*v)));
        }
        r.at(k) = std::move(p);
    }
    return r;
}

/// U(zeta^s) = prod (1-q^n)(1-zeta^s q^n)(1-zeta^-s q^n)
///           = sum_j (-1)^j q^(j(j+1)/2) (zeta^(-sj) + ... + zeta^(sj)).
inline QSeries theta_unit_series(int N, int s = 1) {
    QSeries r(N, 0);
    for (int j = 0; j * (j + 1) / 2 <= N; ++j) {
        ZetaPoly p;
        ExactScalar sg((j % 2 == 0) ? 1 : -1);
        for (int k = -j; k <= j; ++k) p.push_sorted(2 * s * k, sg);
        r.at(j * (j + 1) / 2) = std::move(p);
    }
    return r;
}

/// theta(s z) rebuilt from the sum form: i (zeta^(s/2) - zeta^(-s/2)) q^(1/8) U(zeta^s).
inline QSeries theta_series_from_sum(int N, int s = 1) {
    ZetaPoly pre = ZetaPoly::monomial(-s, ExactScalar(mpq_class(0), mpq_class(-1))) +
                   ZetaPoly::monomial(s, ExactScalar::imag_unit());
    QSeries u = theta_unit_series(N, s);
    QSeries r(N, 3);
    for (int k = 0; k <= N; ++k) r.at(k) = u[k].empty() ? ZetaPoly() : pre * u[k];
    return r;
}

/// P(q) = q^(1/24)/eta = sum p(n) q^n.
inline QSeries p_series(int N) { return series_invert(euler_series(N)); }

/// eta(2 tau)^8 / eta(tau)^16, offset 0.
inline QSeries residue_series(int N) {
    intser::Series s = intser::one(N);
    for (int i = 0; i < 8; ++i) intser::mul_euler(s, 2);
    for (int i = 0; i < 16; ++i) intser::div_euler(s, 1);
    return QSeries::from_integers(s);
}

}  // namespace etq
