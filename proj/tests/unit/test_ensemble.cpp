#include "betaedge/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace betaedge;

// ---- sample_chi -------------------------------------------------------------

TEST(SampleChi, SquaredMeanIsK) {
    RngStream rng(11, 0);
    const int m = 1'000'000;
    double s = 0;
    for (int i = 0; i < m; ++i) {
        double x = sample_chi(2.0, rng);
        s += x * x;
    }
    EXPECT_NEAR(s / m, 2.0, 0.01);
}

TEST(SampleChi, TinyShapeStaysFiniteAndUnbiased) {
    RngStream rng(12, 0);
    const int m = 10'000'000;
    const double k = 1e-6;
    double s = 0, s2 = 0;
    for (int i = 0; i < m; ++i) {
        double x = sample_chi(k, rng);
        ASSERT_TRUE(std::isfinite(x));
        ASSERT_GE(x, 0.0);
        s += x * x;
        s2 += x * x * x * x;
    }
    const double mean = s / m;
    const double se = std::sqrt((s2 / m - mean * mean) / m);
    EXPECT_LE(std::fabs(mean - k), 5.0 * se);
}

TEST(SampleChi, OneDegreeCdfAtOne) {
    RngStream rng(13, 0);
    const int m = 1'000'000;
    int below = 0;
    for (int i = 0; i < m; ++i) below += sample_chi(1.0, rng) <= 1.0;
    // P(|Z| <= 1) = erf(1/sqrt 2)
    EXPECT_NEAR(static_cast<double>(below) / m, std::erf(1.0 / std::sqrt(2.0)), 0.005);
}

TEST(SampleChi, RejectsBadShape) {
    RngStream rng(1, 0);
    EXPECT_THROW(sample_chi(0.0, rng), std::domain_error);
    EXPECT_THROW(sample_chi(-1.0, rng), std::domain_error);
    EXPECT_THROW(sample_chi(NAN, rng), std::domain_error);
    EXPECT_THROW(sample_chi(INFINITY, rng), std::domain_error);
}

// ---- sample_tridiagonal -----------------------------------------------------

TEST(SampleTridiagonal, SizeOneHasNoOffdiagonal) {
    RngStream rng(2, 0);
    auto t = sample_tridiagonal({1, 0.5, 1.0}, rng);
    EXPECT_EQ(t.diag.size(), 1u);
    EXPECT_TRUE(t.offdiag.empty());
}

TEST(SampleTridiagonal, DiagonalSecondMoment) {
    const std::size_t n = 2000;
    const int reps = 200;
    double acc = 0;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(3, r);
        auto t = sample_tridiagonal({n, 1e-5, 1.0}, rng);
        double s = 0;
        for (double d : t.diag) s += d * d;
        acc += s / n;
    }
    EXPECT_NEAR(acc / reps, 1.0, 0.02);
}

TEST(SampleTridiagonal, OffdiagonalSumOfSquares) {
    const std::size_t n = 2000;
    const double beta = 1e-5;
    const int reps = 200;
    std::vector<double> sums;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(4, r);
        auto t = sample_tridiagonal({n, beta, 1.0}, rng);
        double s = 0;
        for (double e : t.offdiag) s += e * e;
        sums.push_back(s);
    }
    double mean = 0, var = 0;
    for (double s : sums) mean += s;
    mean /= reps;
    for (double s : sums) var += (s - mean) * (s - mean);
    var /= reps - 1;
    // direct summation of E[X_m^2]/2 = m beta/2
    double expected = 0;
    for (std::size_t m = 1; m < n; ++m) expected += m * beta / 2.0;
    EXPECT_NEAR(expected, beta * n * (n - 1) / 4.0, 1e-12);
    EXPECT_LE(std::fabs(mean - expected), 5.0 * std::sqrt(var / reps));
}

TEST(SampleTridiagonal, OffdiagonalLayoutAndSign) {
    // with a huge beta the X_m scale as sqrt(m beta), so the top-left entry is the largest
    RngStream rng(5, 0);
    auto t = sample_tridiagonal({400, 50.0, 2.0}, rng);
    for (double e : t.offdiag) EXPECT_GE(e, 0.0);
    EXPECT_GT(t.offdiag.front(), t.offdiag.back());
    EXPECT_NEAR(t.offdiag.front(), std::sqrt(399 * 50.0 / (2 * 2.0)), 20.0);
}

TEST(SampleTridiagonal, SecondSpectralMoment) {
    // (1/n) E[trace T^2] = (1/alpha)(1 + beta (n-1)/2)
    const std::size_t n = 300;
    const double beta = 0.2, alpha = 2.0;
    const int reps = 400;
    std::vector<double> v;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(6, r);
        auto t = sample_tridiagonal({n, beta, alpha}, rng);
        double s = 0;
        for (double d : t.diag) s += d * d;
        for (double e : t.offdiag) s += 2 * e * e;
        v.push_back(s / n);
    }
    double mean = 0, var = 0;
    for (double x : v) mean += x;
    mean /= reps;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= reps - 1;
    EXPECT_LE(std::fabs(mean - (1 + beta * (n - 1) / 2) / alpha), 5 * std::sqrt(var / reps));
}

TEST(SampleTridiagonal, Errors) {
    RngStream rng(7, 0);
    EXPECT_THROW(sample_tridiagonal({10, 0.0, 1.0}, rng), std::domain_error);
    EXPECT_THROW(sample_tridiagonal({0, 1.0, 1.0}, rng), std::domain_error);
    EXPECT_THROW(sample_tridiagonal({5, 1.0, 0.0}, rng), std::domain_error);
}

TEST(SampleTridiagonal, DiagonalMatchesIidPathUnderSameStream) {
    RngStream a(8, 42), b(8, 42);
    auto t = sample_tridiagonal({500, 1e-9, 1.5}, a);
    auto x = sample_gaussian_iid(500, 1.5, b);
    EXPECT_EQ(t.diag, x);
}

TEST(SampleTridiagonal, Deterministic) {
    RngStream a(9, 3), b(9, 3);
    auto t1 = sample_tridiagonal({100, 0.3, 1.0}, a);
    auto t2 = sample_tridiagonal({100, 0.3, 1.0}, b);
    EXPECT_EQ(t1.diag, t2.diag);
    EXPECT_EQ(t1.offdiag, t2.offdiag);
}

// ---- sample_gaussian_iid ----------------------------------------------------

TEST(SampleGaussianIid, MeanAndVariance) {
    RngStream rng(10, 0);
    auto x = sample_gaussian_iid(1'000'000, 1.0, rng);
    double m = 0, v = 0;
    for (double e : x) m += e;
    m /= x.size();
    for (double e : x) v += (e - m) * (e - m);
    v /= x.size() - 1;
    EXPECT_NEAR(m, 0.0, 0.004);
    EXPECT_NEAR(v, 1.0, 0.005);
}

TEST(SampleGaussianIid, VarianceIsInverseAlpha) {
    RngStream rng(11, 0);
    double s = 0, s2 = 0;
    const int m = 100'000;
    for (int i = 0; i < m; ++i) {
        double x = sample_gaussian_iid(1, 4.0, rng)[0];
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s2 / m - (s / m) * (s / m), 0.25, 0.01);
}

TEST(SampleGaussianIid, DeterministicAndStreamsDiffer) {
    RngStream a(1, 5), b(1, 5), c(1, 6);
    auto x = sample_gaussian_iid(64, 1.0, a);
    EXPECT_EQ(x, sample_gaussian_iid(64, 1.0, b));
    EXPECT_NE(x, sample_gaussian_iid(64, 1.0, c));
}

TEST(SampleGaussianIid, NeighbouringStreamsUncorrelated) {
    const int m = 200'000;
    RngStream a(77, 0), b(77, 1);
    double sab = 0;
    for (int i = 0; i < m; ++i) sab += a.gaussian() * b.gaussian();
    EXPECT_LT(std::fabs(sab / m), 5.0 / std::sqrt(m));
}

TEST(SampleGaussianIid, Errors) {
    RngStream rng(1, 0);
    EXPECT_THROW(sample_gaussian_iid(0, 1.0, rng), std::domain_error);
    EXPECT_THROW(sample_gaussian_iid(3, -1.0, rng), std::domain_error);
}
