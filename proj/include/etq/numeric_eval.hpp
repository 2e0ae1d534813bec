#pragma once

// Floating-point evaluation of exact q-series.

#include <cmath>
#include <complex>
#include <vector>

#include "etq/qseries.hpp"

namespace etq {

struct NumericValue {
    std::complex<double> value;
    double tail_bound = 0.0;  // estimated size of the omitted orders
};

/// A QSeries flattened to complex<double> coefficients, for repeated evaluation.
class NumericSeries {
public:
    NumericSeries() = default;
    explicit NumericSeries(const QSeries& a) : N_(a.order()), off24_(a.offset24()) {
        start_.reserve(N_ + 2);
        for (int k = 0; k <= N_; ++k) {
            start_.push_back(static_cast<int>(exp2_.size()));
            for (const auto& t : a[k].terms()) {
                exp2_.push_back(t.exp2);
                coef_.push_back(t.coeff.to_complex());
                emin_ = std::min(emin_, t.exp2);
                emax_ = std::max(emax_, t.exp2);
            }
        }
        start_.push_back(static_cast<int>(exp2_.size()));
    }

    int order() const { return N_; }

    /// Sum at (z, tau). Throws NotConverged if the tail estimate exceeds tol * |value| + tol.
    NumericValue evaluate(std::complex<double> z, std::complex<double> tau, double tol = 1e-15) const {
        const std::complex<double> I(0, 1);
        const std::complex<double> q = std::exp(2.0 * M_PI * I * tau);
        const double aq = std::abs(q);
        if (!(aq < 1.0)) throw NotConverged("evaluate_numeric: |q| >= 1");

        // zeta^(e/2) for every exponent that occurs
        std::vector<std::complex<double>> zp;
        std::vector<double> zabs;
        if (emin_ <= emax_) {
            const std::complex<double> w = std::exp(I * M_PI * z);
            zp.resize(emax_ - emin_ + 1);
            zp[0] = std::exp(I * M_PI * double(emin_) * z);
            for (std::size_t i = 1; i < zp.size(); ++i) zp[i] = zp[i - 1] * w;
            zabs.resize(zp.size());
            for (std::size_t i = 0; i < zp.size(); ++i) zabs[i] = std::abs(zp[i]);
        }

        std::complex<double> sum = 0, qk = 1;
        double aqk = 1;
        std::vector<double> mag(N_ + 1, 0.0);  // sum |c| |zeta^(e/2)| at each order
        for (int k = 0; k <= N_; ++k) {
            std::complex<double> ck = 0;
            double mk = 0;
            for (int t = start_[k]; t < start_[k + 1]; ++t) {
                ck += coef_[t] * zp[exp2_[t] - emin_];
                mk += std::abs(coef_[t]) * zabs[exp2_[t] - emin_];
            }
            sum += ck * qk;
            mag[k] = mk;
            qk *= q;
            aqk *= aq;
        }
        const std::complex<double> pre = std::exp(2.0 * M_PI * I * tau * (double(off24_) / 24.0));

        // Tail estimate: largest recent coefficient size times a geometric tail,
        // with a growth rate read off the second half of the stored orders.
        double peak_hi = 0, peak_mid = 0;
        for (int k = N_ / 2; k <= N_; ++k) peak_hi = std::max(peak_hi, mag[k]);
        for (int k = N_ / 4; k <= N_ / 2; ++k) peak_mid = std::max(peak_mid, mag[k]);
        double growth = 1.0;
        if (peak_mid > 0 && peak_hi > peak_mid && N_ >= 4) growth = std::pow(peak_hi / peak_mid, 2.0 / N_);
        const double rho = aq * growth;
        NumericValue out;
        out.value = pre * sum;
        if (rho >= 1.0) throw NotConverged("evaluate_numeric: coefficient growth defeats |q|");
        out.tail_bound = std::abs(pre) * peak_hi * std::pow(aq, N_ + 1) * std::pow(growth, N_ / 2 + 1) / (1.0 - rho);
        if (out.tail_bound > tol * (1.0 + std::abs(out.value)))
            throw NotConverged("evaluate_numeric: truncation tail above tolerance");
        return out;
    }

private:
    int N_ = 0;
    long off24_ = 0;
    int emin_ = 1 << 30, emax_ = -(1 << 30);
    std::vector<int> start_, exp2_;
    std::vector<std::complex<double>> coef_;
};

inline NumericValue evaluate_numeric(const QSeries& a, std::complex<double> z, std::complex<double> tau,
                                     double tol = 1e-15) {
    return NumericSeries(a).evaluate(z, tau, tol);
}

}  // namespace etq
