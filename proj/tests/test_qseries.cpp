#include <gtest/gtest.h>

#include <random>

#include "etq/modular.hpp"
#include "etq/numeric_eval.hpp"
#include "etq/serialize.hpp"

using namespace etq;

namespace {

// Brute-force prod_{n=1}^{N} (1 - q^n) by schoolbook polynomial multiplication.
std::vector<long long> brute_euler(int N) {
    std::vector<long long> p(N + 1, 0);
    p[0] = 1;
    for (int n = 1; n <= N; ++n) {
        std::vector<long long> f(N + 1, 0);
        f[0] = 1;
        f[n] = -1;
        std::vector<long long> r(N + 1, 0);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; i + j <= N; ++j) r[i + j] += p[i] * f[j];
        p = r;
    }
    return p;
}

// Number of partitions of n by explicit enumeration of nonincreasing part lists.
long count_partitions(int n, int max_part) {
    if (n == 0) return 1;
    long c = 0;
    for (int k = std::min(n, max_part); k >= 1; --k) c += count_partitions(n - k, k);
    return c;
}

// Euler's pentagonal recurrence p(n) = sum_k (-1)^(k+1) [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)].
std::vector<mpz_class> pentagonal_partitions(int N) {
    std::vector<mpz_class> p(N + 1);
    p[0] = 1;
    for (int n = 1; n <= N; ++n) {
        mpz_class s = 0;
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > n) break;
            mpz_class t = p[n - g1];
            if (g2 <= n) t += p[n - g2];
            if (k % 2 == 1)
                s += t;
            else
                s -= t;
        }
        p[n] = s;
    }
    return p;
}

// prod ((1+q^n)/(1-q^n))^8 by direct multiplication of binomial factors.
std::vector<mpz_class> overpartition8(int N) {
    std::vector<mpz_class> s(N + 1);
    s[0] = 1;
    for (int n = 1; n <= N; ++n)
        for (int rep = 0; rep < 8; ++rep) {
            for (int k = N; k >= n; --k) s[k] += s[k - n];  // (1 + q^n)
            for (int k = n; k <= N; ++k) s[k] += s[k - n];  // 1/(1 - q^n)
        }
    return s;
}

QSeries univariate(std::vector<long> v, long off = 0) {
    std::vector<mpz_class> z(v.begin(), v.end());
    return QSeries::from_integers(z, off);
}

QSeries random_series(std::mt19937& rng, int N, bool unit) {
    std::uniform_int_distribution<int> coef(-5, 5), expo(-6, 6), cnt(0, 3);
    QSeries s(N, 0);
    for (int k = 0; k <= N; ++k) {
        std::vector<ZetaTerm> ts;
        int c = cnt(rng);
        for (int i = 0; i < c; ++i)
            ts.push_back({2 * expo(rng), ExactScalar(mpq_class(coef(rng), 1 + (i % 2)), mpq_class(coef(rng)))});
        s.at(k) = ZetaPoly::from_terms(std::move(ts));
    }
    if (unit) s.at(0) = ZetaPoly::constant(ExactScalar(mpq_class(1 + (coef(rng) & 3)), mpq_class(1)));
    return s;
}

}  // namespace

TEST(ExactScalar, ArithmeticIsExact) {
    ExactScalar a(mpq_class(1, 3), mpq_class(-2, 5));
    ExactScalar b(mpq_class(7, 2), mpq_class(1, 7));
    ExactScalar p = a * b;
    EXPECT_EQ(p.re(), mpq_class(1, 3) * mpq_class(7, 2) + mpq_class(2, 5) * mpq_class(1, 7));
    EXPECT_EQ((p / b), a);
    EXPECT_EQ(ExactScalar::imag_unit() * ExactScalar::imag_unit(), ExactScalar(-1));
    ExactScalar c(mpq_class(6, 4), mpq_class(0));
    EXPECT_EQ(c.re().get_den(), 2);
}

TEST(ZetaPoly, DivideExact) {
    ZetaPoly one_minus = ZetaPoly::constant(1) - ZetaPoly::monomial(-4, 1);  // 1 - zeta^-2
    ZetaPoly x = ZetaPoly::monomial(6, 3) + ZetaPoly::monomial(-2, ExactScalar::imag_unit());
    EXPECT_EQ((x * one_minus).divide_exact(one_minus), x);
    EXPECT_THROW(ZetaPoly::monomial(0, 1).divide_exact(one_minus), Error);
}

TEST(SeriesAdd, Basics) {
    QSeries a = univariate({1, 1, 0});
    QSeries b = univariate({0, 1, 0});
    EXPECT_EQ(series_add(a, b), univariate({1, 2, 0}));
    EXPECT_EQ(series_add(a, QSeries(2)), a);
}

TEST(SeriesAdd, EtaPlusEtaMatchesBruteForce) {
    auto bf = brute_euler(50);
    QSeries e = eta_series(50);
    QSeries two = series_add(e, e);
    EXPECT_EQ(two.offset24(), 1);
    for (int k = 0; k <= 50; ++k) EXPECT_EQ(two.coefficient(k), ExactScalar(2 * bf[k])) << k;
}

TEST(SeriesAdd, OffsetHandling) {
    QSeries a = univariate({1, 1}, 24);  // q + q^2
    QSeries b = univariate({1, 0, 0});   // 1
    QSeries s = series_add(a, b);
    EXPECT_EQ(s.offset24(), 0);
    EXPECT_EQ(s.order(), 2);
    EXPECT_EQ(s.coefficient(2), ExactScalar(1));
    EXPECT_THROW(series_add(eta_series(5), QSeries::one(5)), OffsetMisalignment);
}

TEST(SeriesMul, GeometricAndInverse) {
    const int N = 30;
    std::vector<long> geo(N + 1, 1);
    std::vector<long> om(N + 1, 0);
    om[0] = 1;
    om[1] = -1;
    EXPECT_EQ(series_mul(univariate(om), univariate(geo)), QSeries::one(N));
    QSeries e = eta_series(N);
    QSeries prod = series_mul(e, series_invert(e));
    EXPECT_EQ(prod, QSeries::one(N));
}

TEST(SeriesMul, ThetaOddness) {
    const int N = 20;
    QSeries t = theta_series(N, 1);
    QSeries lhs = series_mul(t, negate_zeta(t));
    QSeries rhs = series_neg(series_mul(t, t));
    EXPECT_EQ(lhs, rhs);
}

TEST(SeriesMul, RingLawsRandomized) {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 6; ++trial) {
        const int N = 10 + 4 * trial;
        QSeries a = random_series(rng, N, false), b = random_series(rng, N, false), c = random_series(rng, N, false);
        EXPECT_EQ(series_mul(a, b), series_mul(b, a));
        EXPECT_EQ(series_mul(series_mul(a, b), c), series_mul(a, series_mul(b, c)));
        EXPECT_EQ(series_mul(a, series_add(b, c)), series_add(series_mul(a, b), series_mul(a, c)));
        EXPECT_EQ(series_add(a, b), series_add(b, a));
        QSeries u = random_series(rng, N, true);
        QSeries one = QSeries::one(N);
        EXPECT_EQ(series_mul(u, series_invert(u)), one);
        EXPECT_EQ(series_mul(series_div(a, u), u), a);
    }
}

TEST(SeriesInvert, Examples) {
    const int N = 25;
    std::vector<long> om(N + 1, 0), geo(N + 1, 1);
    om[0] = 1;
    om[1] = -1;
    EXPECT_EQ(series_invert(univariate(om)), univariate(geo));
    QSeries p = series_invert(euler_series(12));
    EXPECT_EQ(p.coefficient(10), ExactScalar(count_partitions(10, 10)));
    EXPECT_EQ(count_partitions(10, 10), 42);
    QSeries bad = QSeries::one(5);
    bad.at(0) = ZetaPoly::monomial(2, 1);
    EXPECT_THROW(series_invert(bad), NonUnit);
    EXPECT_THROW(series_invert(QSeries(5)), NonUnit);
}

TEST(EtaSeries, Coefficients) {
    QSeries e = eta_series(10);
    EXPECT_EQ(e.offset24(), 1);
    EXPECT_EQ(e.coefficient(0), ExactScalar(1));
    EXPECT_EQ(e.coefficient(1), ExactScalar(-1));
    EXPECT_EQ(e.coefficient(5), ExactScalar(1));
    auto bf = brute_euler(10);
    for (int k = 0; k <= 10; ++k) EXPECT_EQ(e.coefficient(k), ExactScalar(bf[k]));
}

TEST(ThetaSeries, LeadingCoefficients) {
    QSeries t1 = theta_series(8, 1);
    EXPECT_EQ(t1.offset24(), 3);
    ZetaPoly want1 = ZetaPoly::monomial(1, ExactScalar::imag_unit()) -
                     ZetaPoly::monomial(-1, ExactScalar::imag_unit());
    EXPECT_EQ(t1[0], want1);
    QSeries t2 = theta_series(8, 2);
    ZetaPoly want2 = ZetaPoly::monomial(2, ExactScalar::imag_unit()) -
                     ZetaPoly::monomial(-2, ExactScalar::imag_unit());
    EXPECT_EQ(t2[0], want2);
    EXPECT_EQ(t2, dilate_zeta(t1, 2));
}

TEST(ThetaSeries, OddInZeta) {
    QSeries t = theta_series(40, 1);
    EXPECT_EQ(negate_zeta(t), series_neg(t));
}

TEST(ThetaSeries, ProductEqualsTripleProductSum) {
    for (int s : {1, 2, 3}) EXPECT_EQ(theta_series(60, s), theta_series_from_sum(60, s)) << s;
}

TEST(PSeries, SmallValues) {
    QSeries p = p_series(10);
    EXPECT_EQ(p.offset24(), 0);
    EXPECT_EQ(p.coefficient(0), ExactScalar(1));
    EXPECT_EQ(p.coefficient(4), ExactScalar(5));
}

TEST(PSeries, MatchesPentagonalRecurrenceTo500) {
    auto oracle = pentagonal_partitions(500);
    auto got = p_series(500).integer_coeffs();
    for (int n = 0; n <= 500; ++n) ASSERT_EQ(got[n], oracle[n]) << n;
    EXPECT_EQ(got[100], mpz_class("190569292"));
}

TEST(ResidueSeries, MatchesOverpartitionProduct) {
    auto got = residue_series(200).integer_coeffs();
    auto oracle = overpartition8(200);
    EXPECT_EQ(got[0], 1);
    EXPECT_EQ(got[1], 16);
    for (int n = 0; n <= 200; ++n) ASSERT_EQ(got[n], oracle[n]) << n;
}

TEST(ResidueSeries, MatchesGenericEtaQuotient) {
    const int N = 40;
    QSeries e = eta_series(N);
    QSeries num = series_pow(dilate_q(e, 2, N), 8);
    QSeries den = series_pow(e, 16);
    QSeries q = series_div(num, den);
    EXPECT_EQ(q.offset24(), 0);
    EXPECT_EQ(q, residue_series(N));
}

TEST(EvaluateNumeric, Examples) {
    std::vector<long> om(60, 0);  // 1 - q, known to be exact through q^59
    om[0] = 1;
    om[1] = -1;
    auto v = evaluate_numeric(univariate(om), 0.3, std::complex<double>(0, std::log(2.0) / (2 * M_PI)));
    EXPECT_NEAR(v.value.real(), 0.5, 1e-15);
    EXPECT_NEAR(v.value.imag(), 0.0, 1e-15);

    const double eta_i = std::tgamma(0.25) / (2.0 * std::pow(M_PI, 0.75));
    auto e = evaluate_numeric(eta_series(60), 0.0, std::complex<double>(0, 1));
    EXPECT_NEAR(e.value.real(), eta_i, 1e-14);
    EXPECT_NEAR(eta_i, 0.768225422326056, 1e-12);
}

TEST(EvaluateNumeric, ResidueTwoPaths) {
    const std::complex<double> tau(0, 0.1);
    const int N = 400;
    auto r = evaluate_numeric(residue_series(N), 0.0, tau, 1e-13).value;
    auto e2 = evaluate_numeric(eta_series(N), 0.0, 2.0 * tau).value;
    auto e1 = evaluate_numeric(eta_series(N), 0.0, tau).value;
    std::complex<double> direct = std::pow(e2, 8) / std::pow(e1, 16);
    EXPECT_LT(std::abs(r / direct - 1.0), 1e-10);
}

TEST(EvaluateNumeric, ProductOfEvaluations) {
    const int N = 80;
    QSeries a = theta_series(N, 1), b = theta_unit_series(N, 2);
    std::complex<double> z(0.17, 0.01), tau(0.1, 0.35);
    auto va = evaluate_numeric(a, z, tau), vb = evaluate_numeric(b, z, tau);
    auto vab = evaluate_numeric(series_mul(a, b), z, tau);
    double bound = va.tail_bound * std::abs(vb.value) + vb.tail_bound * std::abs(va.value) + vab.tail_bound;
    EXPECT_LE(std::abs(vab.value - va.value * vb.value), bound + 1e-13 * std::abs(vab.value));
}

TEST(EvaluateNumeric, NotConvergedWhenTruncatedTooEarly) {
    EXPECT_THROW(evaluate_numeric(p_series(10), 0.0, std::complex<double>(0, 0.01)), NotConverged);
}

TEST(Serialize, RoundTrip) {
    QSeries t = series_mul(theta_series(12, 1), residue_series(12));
    QSeries back = qseries_from_json(nlohmann::json::parse(to_json(t).dump()));
    EXPECT_EQ(back, t);
    QSeries big = residue_series(300);
    EXPECT_EQ(qseries_from_json(to_json(big)), big);
}
