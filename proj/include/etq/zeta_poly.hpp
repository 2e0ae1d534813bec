#pragma once

/**
 * @file zeta_poly.hpp
 * @brief Sparse Laurent polynomials in zeta^(1/2) with ExactScalar coefficients.
 *
 * Exponents are stored doubled: the key e stands for zeta^(e/2). Terms are
 * kept sorted by exponent with no zero coefficients, so min/max exponent
 * are the first and last entries.
 */

#include <algorithm>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "etq/errors.hpp"
#include "etq/exact_scalar.hpp"

namespace etq {

struct ZetaTerm {
    int exp2;
    ExactScalar coeff;
};

class ZetaPoly {
public:
    ZetaPoly() = default;

    static ZetaPoly monomial(int exp2, ExactScalar c) {
        ZetaPoly p;
        if (!c.is_zero()) p.terms_.push_back({exp2, std::move(c)});
        return p;
    }
    static ZetaPoly constant(ExactScalar c) { return monomial(0, std::move(c)); }

    // Build from unsorted, possibly repeated terms.
    static ZetaPoly from_terms(std::vector<ZetaTerm> ts) {
        std::sort(ts.begin(), ts.end(), [](const ZetaTerm& a, const ZetaTerm& b) { return a.exp2 < b.exp2; });
        ZetaPoly p;
        for (auto& t : ts) {
            if (!p.terms_.empty() && p.terms_.back().exp2 == t.exp2)
                p.terms_.back().coeff += t.coeff;
            else
                p.terms_.push_back(std::move(t));
        }
        p.drop_zeros();
        return p;
    }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    int min_exp() const { return terms_.front().exp2; }
    int max_exp() const { return terms_.back().exp2; }
    const std::vector<ZetaTerm>& terms() const { return terms_; }

    bool is_scalar() const { return terms_.size() == 1 && terms_[0].exp2 == 0; }

    ExactScalar coeff(int exp2) const {
        auto it = find(exp2);
        return it == terms_.end() ? ExactScalar() : it->coeff;
    }

    ZetaPoly operator-() const {
        ZetaPoly r = *this;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    ZetaPoly& operator+=(const ZetaPoly& o) { return merge(o, false); }
    ZetaPoly& operator-=(const ZetaPoly& o) { return merge(o, true); }
    friend ZetaPoly operator+(ZetaPoly a, const ZetaPoly& b) { return a += b; }
    friend ZetaPoly operator-(ZetaPoly a, const ZetaPoly& b) { return a -= b; }

    friend ZetaPoly operator*(const ZetaPoly& a, const ZetaPoly& b);

    ZetaPoly scaled(const ExactScalar& c) const {
        if (c.is_zero()) return {};
        ZetaPoly r = *this;
        for (auto& t : r.terms_) t.coeff *= c;
        return r;
    }

    // Multiply by zeta^(d2/2).
    ZetaPoly shifted(int d2) const {
        ZetaPoly r = *this;
        for (auto& t : r.terms_) t.exp2 += d2;
        return r;
    }

    // zeta -> zeta^s for integer s != 0.
    ZetaPoly dilated(int s) const {
        std::vector<ZetaTerm> ts = terms_;
        for (auto& t : ts) t.exp2 *= s;
        if (s < 0) std::reverse(ts.begin(), ts.end());
        ZetaPoly r;
        r.terms_ = std::move(ts);
        return r;
    }

    ZetaPoly negated_exponents() const { return dilated(-1); }

    // Exact division by a nonzero divisor; throws if a remainder is left.
    ZetaPoly divide_exact(const ZetaPoly& d) const {
        if (d.empty()) throw std::domain_error("ZetaPoly: division by zero");
        ZetaPoly rem = *this;
        std::vector<ZetaTerm> quot;
        if (rem.empty()) return {};
        const int dmax = d.max_exp();
        const int qmin = rem.min_exp() - d.min_exp();
        const ExactScalar& lead = d.terms_.back().coeff;
        while (!rem.empty()) {
            int e = rem.max_exp() - dmax;
            if (e < qmin) throw Error("ZetaPoly: inexact division");
            ExactScalar c = rem.terms_.back().coeff / lead;
            rem -= d.shifted(e).scaled(c);
            quot.push_back({e, std::move(c)});
        }
        return from_terms(std::move(quot));
    }

    std::complex<double> evaluate(std::complex<double> z) const;

    friend bool operator==(const ZetaPoly& a, const ZetaPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].exp2 != b.terms_[i].exp2 || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
        return true;
    }

    // Raw append for accumulators that already produce sorted, nonzero terms.
    void push_sorted(int exp2, ExactScalar c) { terms_.push_back({exp2, std::move(c)}); }

private:
    std::vector<ZetaTerm>::const_iterator find(int exp2) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), exp2,
                                   [](const ZetaTerm& t, int e) { return t.exp2 < e; });
        return (it != terms_.end() && it->exp2 == exp2) ? it : terms_.end();
    }

    void drop_zeros() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const ZetaTerm& t) { return t.coeff.is_zero(); }),
                     terms_.end());
    }

    ZetaPoly& merge(const ZetaPoly& o, bool subtract) {
        std::vector<ZetaTerm> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size() || (i < terms_.size() && terms_[i].exp2 < o.terms_[j].exp2)) {
                out.push_back(std::move(terms_[i++]));
            } else if (i == terms_.size() || o.terms_[j].exp2 < terms_[i].exp2) {
                out.push_back({o.terms_[j].exp2, subtract ? -o.terms_[j].coeff : o.terms_[j].coeff});
                ++j;
            } else {
                ZetaTerm t = std::move(terms_[i++]);
                if (subtract)
                    t.coeff -= o.terms_[j++].coeff;
                else
                    t.coeff += o.terms_[j++].coeff;
                if (!t.coeff.is_zero()) out.push_back(std::move(t));
            }
        }
        terms_ = std::move(out);
        return *this;
    }

    std::vector<ZetaTerm> terms_;
};

/// Dense scratch buffer for sums of ZetaPoly products over a known exponent window.
class ZetaAccumulator {
public:
    void reset(int lo, int hi) {
        lo_ = lo;
        std::size_t n = hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0;
        if (buf_.size() < n) buf_.resize(n);
        for (std::size_t k = 0; k < n; ++k) buf_[k] = ExactScalar();
        used_ = n;
    }

    void add_product(const ZetaPoly& a, const ZetaPoly& b) {
        for (const auto& ta : a.terms())
            for (const auto& tb : b.terms()) buf_[ta.exp2 + tb.exp2 - lo_].add_mul(ta.coeff, tb.coeff);
    }
    void add(const ZetaPoly& a) {
        for (const auto& t : a.terms()) buf_[t.exp2 - lo_] += t.coeff;
    }
    void sub_product(const ZetaPoly& a, const ZetaPoly& b) {
        thread_local ExactScalar neg;
        for (const auto& ta : a.terms()) {
            neg = -ta.coeff;
            for (const auto& tb : b.terms()) buf_[ta.exp2 + tb.exp2 - lo_].add_mul(neg, tb.coeff);
        }
    }

    ZetaPoly take() {
        ZetaPoly p;
        for (std::size_t k = 0; k < used_; ++k)
            if (!buf_[k].is_zero()) p.push_sorted(lo_ + static_cast<int>(k), std::move(buf_[k]));
        used_ = 0;
        return p;
    }

private:
    int lo_ = 0;
    std::size_t used_ = 0;
    std::vector<ExactScalar> buf_;
};

inline ZetaPoly operator*(const ZetaPoly& a, const ZetaPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZetaAccumulator acc;
    acc.reset(a.min_exp() + b.min_exp(), a.max_exp() + b.max_exp());
    acc.add_product(a, b);
    return acc.take();
}

inline std::complex<double> ZetaPoly::evaluate(std::complex<double> z) const {
    // zeta^(e/2) = exp(i*pi*e*z)
    std::complex<double> s = 0;
    const std::complex<double> I(0, 1);
    for (const auto& t : terms_) s += t.coeff.to_complex() * std::exp(I * M_PI * double(t.exp2) * z);
    return s;
}

}  // namespace etq
