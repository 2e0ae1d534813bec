#pragma once

// Globally adaptive Gauss-Kronrod quadrature. Boost supplies the 15-point
// panel rule and its embedded error estimate; this file owns the bisection
// schedule, the stopping rule and the deterministic final summation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "etq/errors.hpp"

namespace etq {

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;
    int max_panels = 20000;
    int initial_panels = 1;
};

template <class V, class Real>
struct QuadResult {
    V value{};
    Real error{};
    int panels = 0;
};

namespace detail {
template <class V>
auto abs_of(const V& v) {
    using std::abs;
    return abs(v);
}
}  // namespace detail

/// Integrate f over [a, b]. V may be Real or std::complex<Real>.
template <class Real, class F>
auto integrate(F&& f, Real a, Real b, const QuadOptions& opt = {}) {
    using V = std::decay_t<decltype(f(a))>;
    using GK = boost::math::quadrature::gauss_kronrod<Real, 15>;
    struct Panel {
        Real a, b;
        V value;
        Real err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    auto eval = [&](Real lo, Real hi) {
        Real err = 0;
        V v = GK::integrate(f, lo, hi, 0, 0, &err);
        return Panel{lo, hi, v, err};
    };

    std::priority_queue<Panel> heap;
    const int p0 = std::max(1, opt.initial_panels);
    for (int i = 0; i < p0; ++i) heap.push(eval(a + (b - a) * i / p0, a + (b - a) * (i + 1) / p0));

    // Exact totals in position order; the running totals in between only steer the loop.
    auto recompute = [&](QuadResult<V, Real>& r) {
        std::vector<Panel> all;
        all.reserve(heap.size());
        auto copy = heap;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        r.value = V{};
        r.error = 0;
        for (const auto& p : all) {
            r.value += p.value;
            r.error += p.err;
        }
        r.panels = static_cast<int>(all.size());
    };

    QuadResult<V, Real> out;
    recompute(out);
    for (int it = 1;; ++it) {
        const Real target = std::max(Real(opt.abs_floor), Real(opt.rel_tol) * Real(detail::abs_of(out.value)));
        if (out.error <= target) {
            recompute(out);
            if (out.error <= target) return out;
        }
        if (out.panels >= opt.max_panels)
            throw NotConverged("integrate: panel budget exhausted, error estimate " +
                               std::to_string(static_cast<double>(out.error)));
        Panel w = heap.top();
        heap.pop();
        const Real mid = (w.a + w.b) / 2;
        Panel l = eval(w.a, mid), r = eval(mid, w.b);
        out.value += l.value + r.value - w.value;
        out.error += l.err + r.err - w.err;
        out.panels += 1;
        heap.push(std::move(l));
        heap.push(std::move(r));
        if (it % 64 == 0) recompute(out);
    }
}

/// Integrate f over [a, inf) for an integrand with exponential decay. The range is cut
/// where |f| falls below 1e-20 of the largest sampled value; the tail beyond the cut is
/// bounded by |f(W)|/lambda with lambda the local decay rate, and added to the error.
template <class Real, class F>
auto integrate_to_infinity(F&& f, Real a, Real step = 1, const QuadOptions& opt = {}) {
    using std::abs;
    using std::log;
    Real peak = 0, W = a;
    Real prev = abs(f(a));
    peak = prev;
    for (int i = 0; i < 4000; ++i) {
        W += step;
        Real v = abs(f(W));
        peak = std::max(peak, v);
        if (v < Real(1e-20) * peak && v < prev) break;
        prev = v;
        if (i == 3999) throw NotConverged("integrate_to_infinity: integrand does not decay");
    }
    auto r = integrate(f, a, W, opt);
    const Real fw = abs(f(W)), fw2 = abs(f(W + step));
    Real tail = fw * step;
    if (fw2 > 0 && fw2 < fw) tail = fw / (log(fw / fw2) / step);
    r.error += tail;
    return r;
}

}  // namespace etq
