#pragma once

/**
 * @file qseries.hpp
 * @brief Truncated q-series with ZetaPoly coefficients.
 *
 * A QSeries of order N with offset mu (an integer number of 1/24 steps)
 * represents sum_{k=0}^{N} c[k] q^(mu/24 + k). Coefficients past N are
 * unknown, and every operation propagates that truncation.
 */

#include <algorithm>
#include <climits>
#include <vector>

#include "etq/errors.hpp"
#include "etq/parallel.hpp"
#include "etq/zeta_poly.hpp"

namespace etq {

class QSeries {
public:
    QSeries() = default;
    explicit QSeries(int order, long offset24 = 0) : N_(order), off_(offset24), c_(order + 1) {
        if (order < 0) throw std::invalid_argument("QSeries: negative order");
    }

    static QSeries one(int order) { return constant(order, ExactScalar(1)); }
    static QSeries constant(int order, ExactScalar c, long offset24 = 0) {
        QSeries s(order, offset24);
        s.c_[0] = ZetaPoly::constant(std::move(c));
        return s;
    }
    static QSeries from_integers(const std::vector<mpz_class>& v, long offset24 = 0) {
        QSeries s(static_cast<int>(v.size()) - 1, offset24);
        for (std::size_t k = 0; k < v.size(); ++k) s.c_[k] = ZetaPoly::constant(ExactScalar(v[k]));
        return s;
    }

    int order() const { return N_; }
    long offset24() const { return off_; }
    void set_offset24(long off) { off_ = off; }

    const ZetaPoly& operator[](int k) const { return c_.at(k); }
    ZetaPoly& at(int k) { return c_.at(k); }
    const std::vector<ZetaPoly>& coeffs() const { return c_; }

    ExactScalar coefficient(int k, int exp2 = 0) const { return c_.at(k).coeff(exp2); }

    bool is_univariate() const {
        for (const auto& p : c_)
            if (!p.empty() && !p.is_scalar()) return false;
        return true;
    }

    // Integer coefficients of a univariate series; throws on non-integers.
    std::vector<mpz_class> integer_coeffs() const {
        std::vector<mpz_class> v(N_ + 1);
        for (int k = 0; k <= N_; ++k) {
            if (c_[k].empty()) continue;
            if (!c_[k].is_scalar()) throw Error("QSeries: coefficient is not a scalar");
            const ExactScalar& s = c_[k].terms()[0].coeff;
            if (!s.is_real() || s.re().get_den() != 1) throw Error("QSeries: coefficient is not an integer");
            v[k] = s.re().get_num();
        }
        return v;
    }

    QSeries truncated(int order) const {
        QSeries r(std::min(order, N_), off_);
        for (int k = 0; k <= r.N_; ++k) r.c_[k] = c_[k];
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.N_ == b.N_ && a.off_ == b.off_ && a.c_ == b.c_;
    }

private:
    int N_ = 0;
    long off_ = 0;
    std::vector<ZetaPoly> c_{1};
};

namespace detail {

inline long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// Common offset and order for a sum; offsets must agree modulo whole q-steps.
inline void align(const QSeries& a, const QSeries& b, long& off, int& order) {
    if ((a.offset24() - b.offset24()) % 24 != 0)
        throw OffsetMisalignment("series offsets differ by a non-integral power of q");
    off = std::min(a.offset24(), b.offset24());
    long top = std::min(a.offset24() + 24L * a.order(), b.offset24() + 24L * b.order());
    order = static_cast<int>(floor_div(top - off, 24));
}

}  // namespace detail

inline QSeries series_add(const QSeries& a, const QSeries& b) {
    long off;
    int n;
    detail::align(a, b, off, n);
    QSeries r(n, off);
    const int da = static_cast<int>((a.offset24() - off) / 24), db = static_cast<int>((b.offset24() - off) / 24);
    for (int k = 0; k <= n; ++k) {
        ZetaPoly v;
        if (k - da >= 0 && k - da <= a.order()) v += a[k - da];
        if (k - db >= 0 && k - db <= b.order()) v += b[k - db];
        r.at(k) = std::move(v);
    }
    return r;
}

inline QSeries series_scale(const QSeries& a, const ExactScalar& c) {
    QSeries r(a.order(), a.offset24());
    for (int k = 0; k <= a.order(); ++k) r.at(k) = a[k].scaled(c);
    return r;
}

inline QSeries series_neg(const QSeries& a) { return series_scale(a, ExactScalar(-1)); }

inline QSeries series_sub(const QSeries& a, const QSeries& b) { return series_add(a, series_neg(b)); }

// Multiply every coefficient by c * zeta^(exp2/2) * q^(dq24/24).
inline QSeries series_mul_monomial(const QSeries& a, const ExactScalar& c, int exp2, long dq24 = 0) {
    QSeries r(a.order(), a.offset24() + dq24);
    for (int k = 0; k <= a.order(); ++k) r.at(k) = a[k].shifted(exp2).scaled(c);
    return r;
}

inline QSeries series_mul(const QSeries& a, const QSeries& b) {
    const int n = std::min(a.order(), b.order());
    QSeries r(n, a.offset24() + b.offset24());
    std::vector<int> nza, nzb;
    for (int k = 0; k <= n; ++k) {
        if (!a[k].empty()) nza.push_back(k);
        if (!b[k].empty()) nzb.push_back(k);
    }
    parallel_for(0, n + 1, [&](long kk) {
        const int k = static_cast<int>(kk);
        int lo = INT_MAX, hi = INT_MIN;
        for (int i : nza) {
            if (i > k) break;
            const ZetaPoly& y = b[k - i];
            if (y.empty()) continue;
            lo = std::min(lo, a[i].min_exp() + y.min_exp());
            hi = std::max(hi, a[i].max_exp() + y.max_exp());
        }
        if (lo > hi) return;
        thread_local ZetaAccumulator acc;
        acc.reset(lo, hi);
        for (int i : nza) {
            if (i > k) break;
            if (!b[k - i].empty()) acc.add_product(a[i], b[k - i]);
        }
        r.at(k) = acc.take();
    });
    return r;
}

// a / b where b[0] is a nonzero pure scalar. Higher coefficients of b may carry zeta.
inline QSeries series_div(const QSeries& a, const QSeries& b) {
    if (b[0].empty() || !b[0].is_scalar()) throw NonUnit("leading coefficient is not a nonzero scalar");
    const int n = std::min(a.order(), b.order());
    QSeries r(n, a.offset24() - b.offset24());
    const ExactScalar& b0 = b[0].terms()[0].coeff;
    const bool b0_one = b0 == ExactScalar(1);
    std::vector<int> nzb;
    for (int j = 1; j <= n; ++j)
        if (!b[j].empty()) nzb.push_back(j);
    ZetaAccumulator acc;
    for (int k = 0; k <= n; ++k) {
        int lo = INT_MAX, hi = INT_MIN;
        if (!a[k].empty()) {
            lo = a[k].min_exp();
            hi = a[k].max_exp();
        }
        for (int j : nzb) {
            if (j > k) break;
            const ZetaPoly& y = r[k - j];
            if (y.empty()) continue;
            lo = std::min(lo, b[j].min_exp() + y.min_exp());
            hi = std::max(hi, b[j].max_exp() + y.max_exp());
        }
        if (lo > hi) continue;
        acc.reset(lo, hi);
        acc.add(a[k]);
        for (int j : nzb) {
            if (j > k) break;
            if (!r[k - j].empty()) acc.sub_product(b[j], r[k - j]);
        }
        ZetaPoly v = acc.take();
        r.at(k) = b0_one ? std::move(v) : v.scaled(ExactScalar(1) / b0);
    }
    return r;
}

inline QSeries series_invert(const QSeries& a) {
    if (a[0].empty() || !a[0].is_scalar()) throw NonUnit("series_invert: leading coefficient is not a nonzero scalar");
    return series_div(QSeries::one(a.order()), a);
}

inline QSeries series_pow(const QSeries& a, unsigned e) {
    QSeries r = QSeries::one(a.order());
    QSeries base = a;
    bool first = true;
    while (e) {
        if (e & 1u) {
            r = first ? base : series_mul(r, base);
            first = false;
        }
        e >>= 1u;
        if (e) base = series_mul(base, base);
    }
    return r;
}

// q -> q^k. The result is known through order k*N + k - 1; we keep k*N.
inline QSeries dilate_q(const QSeries& a, int k, int order = -1) {
    if (k < 1) throw std::invalid_argument("dilate_q: k must be positive");
    const int n = order < 0 ? k * a.order() : std::min(order, k * a.order() + k - 1);
    QSeries r(n, a.offset24() * k);
    for (int j = 0; j <= a.order() && j * k <= n; ++j) r.at(j * k) = a[j];
    return r;
}

// zeta -> zeta^s.
inline QSeries dilate_zeta(const QSeries& a, int s) {
    QSeries r(a.order(), a.offset24());
    for (int k = 0; k <= a.order(); ++k) r.at(k) = a[k].dilated(s);
    return r;
}

inline QSeries negate_zeta(const QSeries& a) { return dilate_zeta(a, -1); }

}  // namespace etq
