#pragma once

/**
 * @file fourier_extract.hpp
 * @brief Exact principal-value Fourier coefficients b(m,n) of
 *        f(z;tau) = theta(z)^4 / (eta^9 theta(2z)).
 *
 * Two independent constructions are provided.
 *
 * Average: h = (1 - zeta^-2) f is holomorphic in zeta, so f = h / (1 - zeta^-2)
 * has a one-sided expansion for |zeta| > 1 and another for |zeta| < 1. Their
 * average is the principal-value coefficient. Cost grows like N^3 because the
 * zeta-support of h at order n is about 4n wide.
 *
 * Residue: f is elliptic in z with simple poles at 1/2, tau/2 and (1+tau)/2.
 * Writing f as a constant plus residue multiples of theta'/theta at those
 * poles and expanding each kernel gives, for m >= 1,
 *
 *   b(m,.) = -i [ 4 (-1)^m R (1 + q^m) + q^floor(m/2) A_(m mod 2) ] / (1 - q^m)
 *
 * with R = eta(2tau)^8/eta(tau)^16, P(t) = prod_{n>=1} (1 - t^(2n-1))^8,
 * A_1 = (even part of P in t = q^(1/2)) / (q;q)^8 and
 * A_0 = (odd part of P, divided by t) / (q;q)^8. Each m costs O(N).
 */

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "etq/modular.hpp"
#include "etq/parallel.hpp"
#include "etq/serialize.hpp"

namespace etq {

constexpr int kTableFormatVersion = 1;

struct HSeries {
    QSeries h;                               // offset 0, exponents 2m
    std::vector<std::pair<int, int>> support;  // [min m, max m] per q-order; empty row gives (1, 0)
    int zeta_bound = -1;                     // requested |m| bound, -1 when unchecked

    int max_support() const {
        int s = 0;
        for (auto [lo, hi] : support)
            if (lo <= hi) s = std::max({s, -lo, hi});
        return s;
    }
    ExactScalar at(int m, int n) const { return h[n].coeff(2 * m); }
};

/// h = theta(z)^4 / (eta^9 [theta(2z)/(1 - zeta^-2)]), computed in the unit-series ring.
inline HSeries h_series(int N, int zeta_bound = -1) {
    QSeries t4 = series_pow(theta_series(N, 1), 4);
    QSeries e9 = series_pow(eta_series(N), 9);

    // theta(2z)/(1 - zeta^-2) = i zeta q^(1/8) * unit, with unit[0] = 1.
    const ZetaPoly pole = ZetaPoly::constant(1) - ZetaPoly::monomial(-4, 1);
    QSeries t2 = theta_series(N, 2);
    QSeries unit(N, 0);
    const ExactScalar inv_i(mpq_class(0), mpq_class(-1));
    for (int k = 0; k <= N; ++k) unit.at(k) = t2[k].divide_exact(pole).shifted(-2).scaled(inv_i);
    if (!unit[0].is_scalar() || !(unit[0].terms()[0].coeff == ExactScalar(1)))
        throw NonUnit("h_series: bracket is not a unit after removing i zeta");

    QSeries x = series_div(t4, e9);
    QSeries hq = series_div(x, unit);
    hq = series_mul_monomial(hq, inv_i, -2, -3);  // divide by i zeta q^(1/8)

    HSeries out;
    out.h = std::move(hq);
    out.zeta_bound = zeta_bound;
    out.support.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        const ZetaPoly& p = out.h[k];
        out.support[k] = p.empty() ? std::make_pair(1, 0) : std::make_pair(p.min_exp() / 2, p.max_exp() / 2);
    }
    if (zeta_bound >= 0 && out.max_support() > zeta_bound)
        throw InsufficientSupport("h_series: zeta-support " + std::to_string(out.max_support()) +
                                  " exceeds bound " + std::to_string(zeta_bound));
    return out;
}

/// Dense table of b(m,n) for |m| <= M, 0 <= n <= N.
class CoeffTable {
public:
    CoeffTable() = default;
    CoeffTable(int N, int M) : N_(N), M_(M), v_(static_cast<std::size_t>(2 * M + 1) * (N + 1)) {}

    int n_max() const { return N_; }
    int m_max() const { return M_; }

    const ExactScalar& operator()(int m, int n) const { return v_[idx(m, n)]; }
    ExactScalar& operator()(int m, int n) { return v_[idx(m, n)]; }

    std::string method;
    int h_order = -1;      // order of h used by the average route
    int h_support = -1;    // zeta-support of h at that order

private:
    std::size_t idx(int m, int n) const {
        return static_cast<std::size_t>(n) * (2 * M_ + 1) + static_cast<std::size_t>(m + M_);
    }
    int N_ = 0, M_ = 0;
    std::vector<ExactScalar> v_;
};

inline ExactScalar coefficient_query(const CoeffTable& t, int m, int n) {
    if (n < 0 || n > t.n_max() || m < -t.m_max() || m > t.m_max())
        throw OutOfRange("coefficient_query: (" + std::to_string(m) + "," + std::to_string(n) + ") outside table");
    return t(m, n);
}

/// Average of the two one-sided expansions of h / (1 - zeta^-2).
inline CoeffTable b_table_average(const HSeries& hs, int N, int M) {
    if (N > hs.h.order()) throw InsufficientSupport("b_table: h series is shorter than N_max");
    const int supp = hs.max_support();
    if (hs.zeta_bound >= 0 && supp > hs.zeta_bound)
        throw InsufficientSupport("b_table: h support exceeds its computed bound");
    CoeffTable t(N, M);
    t.method = "average";
    t.h_order = hs.h.order();
    t.h_support = supp;
    const ExactScalar half(mpq_class(1, 2), mpq_class(0));
    parallel_for(0, N + 1, [&](long nn) {
        const int n = static_cast<int>(nn);
        const int W = std::max(M, supp) + 2;
        // plus[i] = sum_{k>=0} h(m+2k), minus[i] = -sum_{k>=1} h(m-2k), i = m + W
        std::vector<ExactScalar> hrow(2 * W + 1), plus(2 * W + 1), minus(2 * W + 1);
        for (const auto& term : hs.h[n].terms()) hrow[term.exp2 / 2 + W] = term.coeff;
        for (int i = 2 * W; i >= 0; --i) {
            plus[i] = hrow[i];
            if (i + 2 <= 2 * W) plus[i] += plus[i + 2];
        }
        for (int i = 0; i <= 2 * W; ++i) {
            if (i - 2 >= 0) {
                minus[i] = minus[i - 2];
                minus[i] -= hrow[i - 2];
            }
        }
        for (int m = -M; m <= M; ++m) {
            ExactScalar v = plus[m + W];
            v += minus[m + W];
            t(m, n) = v * half;
        }
    });
    return t;
}

/// Closed residue decomposition; exact and O(N) per m.
inline CoeffTable b_table_residue(int N, int M) {
    using intser::Series;
    const int NT = 2 * N + 2;
    Series P = intser::one(NT);  // prod (1 - t^(2n-1))^8 = ((t;t)/(t^2;t^2))^8
    for (int i = 0; i < 8; ++i) intser::mul_euler(P, 1);
    for (int i = 0; i < 8; ++i) intser::div_euler(P, 2);
    Series A1(N + 1), A0(N + 1);
    for (int k = 0; k <= N; ++k) {
        A1[k] = P[2 * k];
        A0[k] = P[2 * k + 1];
    }
    for (int i = 0; i < 8; ++i) {
        intser::div_euler(A1, 1);
        intser::div_euler(A0, 1);
    }
    const Series R = residue_series(N).integer_coeffs();

    CoeffTable t(N, M);
    t.method = "residue";
    parallel_for(1, M + 1, [&](long mm) {
        const int m = static_cast<int>(mm);
        const Series& A = (m % 2) ? A1 : A0;
        const int sh = m / 2;
        Series s(N + 1);
        for (int n = 0; n <= N; ++n) {
            s[n] = R[n];
            if (n >= m) s[n] += R[n - m];
            s[n] *= 4;
            if (m % 2) s[n] = -s[n];
            if (n >= sh) s[n] += A[n - sh];
        }
        intser::div_one_minus(s, m);
        for (int n = 0; n <= N; ++n) {
            t(m, n) = ExactScalar::imag(mpq_class(-s[n]));
            t(-m, n) = ExactScalar::imag(mpq_class(s[n]));
        }
    });
    return t;
}

enum class BTableMethod { automatic, average, residue };

/// b(m,n) for |m| <= M_max, n <= N_max. The automatic choice uses the average
/// construction while it is cheap and the residue construction beyond.
inline CoeffTable b_table(int N, int M, BTableMethod method = BTableMethod::automatic) {
    if (N < 0 || M < 0) throw std::invalid_argument("b_table: negative bounds");
    if (method == BTableMethod::automatic) method = N <= 200 ? BTableMethod::average : BTableMethod::residue;
    if (method == BTableMethod::average) return b_table_average(h_series(N), N, M);
    return b_table_residue(N, M);
}

/// Table of the one-sided (|zeta| > 1) expansion: b+(m,n) = b(m,n) + 4i(-1)^m R(n).
inline CoeffTable one_sided_table(const CoeffTable& b) {
    CoeffTable t = b;
    t.method = b.method + "+one-sided";
    const auto R = residue_series(b.n_max()).integer_coeffs();
    for (int n = 0; n <= b.n_max(); ++n)
        for (int m = -b.m_max(); m <= b.m_max(); ++m) {
            mpz_class r = 4 * R[n];
            if (m % 2) r = -r;
            t(m, n) += ExactScalar::imag(mpq_class(r));
        }
    return t;
}

/// Sum_n b(m,n) q^n for real 0 < q < 1, with the last term's size as an error indicator.
inline std::complex<double> table_generating_value(const CoeffTable& t, int m, double q, double* last_term = nullptr) {
    std::complex<double> s = 0;
    double qn = 1.0, last = 0;
    for (int n = 0; n <= t.n_max(); ++n) {
        std::complex<double> c = t(m, n).to_complex() * qn;
        s += c;
        last = std::abs(c);
        qn *= q;
    }
    if (last_term) *last_term = last;
    return s;
}

// ---- serialization ----

inline void write_table_csv(std::ostream& os, const CoeffTable& t) {
    os << "m,n,im_numerator,im_denominator\n";
    for (int m = -t.m_max(); m <= t.m_max(); ++m)
        for (int n = 0; n <= t.n_max(); ++n) {
            const ExactScalar& v = t(m, n);
            if (!v.is_imag()) throw Error("write_table_csv: coefficient has a real part");
            os << m << ',' << n << ',' << v.im().get_num().get_str() << ',' << v.im().get_den().get_str() << '\n';
        }
}

inline nlohmann::json table_to_json(const CoeffTable& t) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int n = 0; n <= t.n_max(); ++n) {
        nlohmann::json row = nlohmann::json::array();
        for (int m = -t.m_max(); m <= t.m_max(); ++m)
            if (!t(m, n).is_zero()) row.push_back(term_to_json(2 * m, t(m, n)));
        coeffs.push_back(std::move(row));
    }
    return {{"format_version", kTableFormatVersion},
            {"offset_num", 0},
            {"offset_den", 24},
            {"N", t.n_max()},
            {"M", t.m_max()},
            {"method", t.method},
            {"h_order", t.h_order},
            {"h_support", t.h_support},
            {"coeffs", std::move(coeffs)}};
}

inline CoeffTable table_from_json(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != kTableFormatVersion) throw Error("table JSON: format version mismatch");
    CoeffTable t(j.at("N").get<int>(), j.at("M").get<int>());
    t.method = j.at("method").get<std::string>();
    t.h_order = j.at("h_order").get<int>();
    t.h_support = j.at("h_support").get<int>();
    const auto& coeffs = j.at("coeffs");
    for (int n = 0; n <= t.n_max(); ++n)
        for (const auto& term : coeffs.at(n)) t(term.at(0).get<int>() / 2, n) = term_scalar_from_json(term);
    return t;
}

}  // namespace etq
