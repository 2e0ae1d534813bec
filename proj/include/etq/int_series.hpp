#pragma once

// Univariate integer power series kernels used where the generic
// Gaussian-rational path would be wasteful (long eta quotients).

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace etq::intser {

using Series = std::vector<mpz_class>;

inline Series one(int N) {
    Series s(N + 1);
    s[0] = 1;
    return s;
}

// Nonzero terms of prod_{n>=1}(1 - q^(step*n)) up to q^N, as (exponent, sign).
inline std::vector<std::pair<int, int>> euler_terms(int N, int step = 1) {
    std::vector<std::pair<int, int>> out{{0, 1}};
    for (long k = 1;; ++k) {
        long a = step * (k * (3 * k - 1) / 2), b = step * (k * (3 * k + 1) / 2);
        if (a > N) break;
        int sg = (k % 2 == 0) ? 1 : -1;
        out.push_back({static_cast<int>(a), sg});
        if (b <= N) out.push_back({static_cast<int>(b), sg});
    }
    return out;
}

// s * prod(1 - q^(step*n)), in place.
inline void mul_euler(Series& s, int step = 1) {
    const int N = static_cast<int>(s.size()) - 1;
    auto terms = euler_terms(N, step);
    for (int n = N; n >= 0; --n) {
        for (std::size_t t = 1; t < terms.size(); ++t) {
            int e = terms[t].first;
            if (e > n) break;
            if (terms[t].second > 0)
                s[n] += s[n - e];
            else
                s[n] -= s[n - e];
        }
    }
}

// s / prod(1 - q^(step*n)), in place.
inline void div_euler(Series& s, int step = 1) {
    const int N = static_cast<int>(s.size()) - 1;
    auto terms = euler_terms(N, step);
    for (int n = 0; n <= N; ++n) {
        for (std::size_t t = 1; t < terms.size(); ++t) {
            int e = terms[t].first;
            if (e > n) break;
            if (terms[t].second > 0)
                s[n] -= s[n - e];
            else
                s[n] += s[n - e];
        }
    }
}

// s / (1 - q^m), in place.
inline void div_one_minus(Series& s, int m) {
    for (std::size_t n = m; n < s.size(); ++n) s[n] += s[n - m];
}

inline Series mul(const Series& a, const Series& b) {
    const std::size_t N = std::min(a.size(), b.size());
    Series r(N);
    for (std::size_t i = 0; i < N; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; i + j < N; ++j)
            if (sgn(b[j]) != 0) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    return r;
}

}  // namespace etq::intser
