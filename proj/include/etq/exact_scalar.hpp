#pragma once

/**
 * @file exact_scalar.hpp
 * @brief Gaussian rationals over GMP.
 *
 * Both parts are mpq_class values kept canonical (positive denominator,
 * lowest terms). Products take fast paths when either factor is purely
 * real or purely imaginary, which is the common case for theta/eta data.
 */

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>

namespace etq {

class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long re) : re_(re) {}
    ExactScalar(const mpz_class& re) : re_(re) {}
    ExactScalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static ExactScalar imag_unit() { return ExactScalar(mpq_class(0), mpq_class(1)); }
    static ExactScalar imag(const mpq_class& v) { return ExactScalar(mpq_class(0), v); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_imag() const { return sgn(re_) == 0; }

    ExactScalar operator-() const { return ExactScalar(mpq_class(-re_), mpq_class(-im_)); }
    ExactScalar conj() const { return ExactScalar(re_, mpq_class(-im_)); }

    ExactScalar& operator+=(const ExactScalar& o) {
        if (sgn(o.re_) != 0) re_ += o.re_;
        if (sgn(o.im_) != 0) im_ += o.im_;
        return *this;
    }
    ExactScalar& operator-=(const ExactScalar& o) {
        if (sgn(o.re_) != 0) re_ -= o.re_;
        if (sgn(o.im_) != 0) im_ -= o.im_;
        return *this;
    }

    // *this += a * b without temporaries for the real/imaginary special cases.
    void add_mul(const ExactScalar& a, const ExactScalar& b) {
        thread_local mpq_class t;
        const bool ar = a.is_real(), ai = a.is_imag(), br = b.is_real(), bi = b.is_imag();
        if (ar && br) {
            mpq_mul(t.get_mpq_t(), a.re_.get_mpq_t(), b.re_.get_mpq_t());
            re_ += t;
        } else if (ar && bi) {
            mpq_mul(t.get_mpq_t(), a.re_.get_mpq_t(), b.im_.get_mpq_t());
            im_ += t;
        } else if (ai && br) {
            mpq_mul(t.get_mpq_t(), a.im_.get_mpq_t(), b.re_.get_mpq_t());
            im_ += t;
        } else if (ai && bi) {
            mpq_mul(t.get_mpq_t(), a.im_.get_mpq_t(), b.im_.get_mpq_t());
            re_ -= t;
        } else {
            re_ += a.re_ * b.re_ - a.im_ * b.im_;
            im_ += a.re_ * b.im_ + a.im_ * b.re_;
        }
    }

    ExactScalar& operator*=(const ExactScalar& o) {
        ExactScalar r;
        r.add_mul(*this, o);
        return *this = std::move(r);
    }

    ExactScalar& operator/=(const ExactScalar& o) {
        if (o.is_zero()) throw std::domain_error("ExactScalar: division by zero");
        mpq_class n2 = o.re_ * o.re_ + o.im_ * o.im_;
        ExactScalar inv(mpq_class(o.re_ / n2), mpq_class(-o.im_ / n2));
        return *this *= inv;
    }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    std::string to_string() const {
        if (is_real()) return re_.get_str();
        if (is_imag()) return im_.get_str() + "i";
        return re_.get_str() + (sgn(im_) < 0 ? "" : "+") + im_.get_str() + "i";
    }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

}  // namespace etq
