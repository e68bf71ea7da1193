#include "betaedge/tridiag_eig.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace betaedge;

namespace {

// dense symmetric oracle, eigenvalues descending
std::vector<double> dense_eigenvalues(const TridiagonalMatrix& t) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = t.diag[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = t.offdiag[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

TridiagonalMatrix random_matrix(std::size_t n, std::mt19937_64& g) {
    std::normal_distribution<double> nd;
    TridiagonalMatrix t;
    for (std::size_t i = 0; i < n; ++i) t.diag.push_back(nd(g));
    for (std::size_t i = 0; i + 1 < n; ++i) t.offdiag.push_back(nd(g));
    return t;
}

} // namespace

TEST(SturmCount, TwoByTwo) {
    TridiagonalMatrix t{{0, 0}, {1}};
    EXPECT_EQ(sturm_count(t, 0.0), 1u);
    EXPECT_EQ(sturm_count(t, -1.5), 0u);
    EXPECT_EQ(sturm_count(t, 1.5), 2u);
}

TEST(SturmCount, StrictAtIsolatedEigenvalue) {
    TridiagonalMatrix t{{0.0}, {}};
    EXPECT_EQ(sturm_count(t, 0.0), 0u);
}

TEST(SturmCount, AboveGershgorinGivesN) {
    std::mt19937_64 g(1);
    auto t = random_matrix(30, g);
    EXPECT_EQ(sturm_count(t, gershgorin(t).upper + 1e-9), 30u);
    EXPECT_EQ(sturm_count(t, gershgorin(t).lower - 1e-9), 0u);
}

TEST(SturmCount, MatchesDenseOracle) {
    std::mt19937_64 g(2);
    auto t = random_matrix(12, g);
    auto ev = dense_eigenvalues(t);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 100; ++i) {
        double x = u(g);
        auto expect = static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double v) { return v < x; }));
        EXPECT_EQ(sturm_count(t, x), expect) << "x=" << x;
    }
}

TEST(SturmCount, NondecreasingInX) {
    std::mt19937_64 g(3);
    auto t = random_matrix(40, g);
    std::size_t prev = 0;
    for (double x = -10; x <= 10; x += 0.01) {
        auto c = sturm_count(t, x);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(SturmCount, RejectsNonFinite) {
    TridiagonalMatrix t{{0, 0}, {1}};
    EXPECT_THROW(sturm_count(t, NAN), std::domain_error);
    EXPECT_THROW(sturm_count(t, INFINITY), std::domain_error);
}

TEST(TopK, TwoByTwoClosedForm) {
    TridiagonalMatrix t{{0.7, 0.7}, {-0.3}};
    auto s = top_k_eigenvalues(t, 2);
    ASSERT_EQ(s.values.size(), 2u);
    EXPECT_NEAR(s.values[0], 1.0, 1e-12);
    EXPECT_NEAR(s.values[1], 0.4, 1e-12);
    EXPECT_TRUE(s.converged);
}

TEST(TopK, MatchesDenseOracleN50) {
    std::mt19937_64 g(4);
    auto t = random_matrix(50, g);
    auto ev = dense_eigenvalues(t);
    auto s = top_k_eigenvalues(t, 5);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(s.values[i], ev[i], 1e-10);
}

TEST(TopK, FullKMatchesQl) {
    std::mt19937_64 g(5);
    auto t = random_matrix(12, g);
    auto a = top_k_eigenvalues(t, 12);
    auto b = full_spectrum(t);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-10);
}

TEST(TopK, PrefixProperty) {
    std::mt19937_64 g(6);
    auto t = random_matrix(45, g);
    auto small = top_k_eigenvalues(t, 4);
    auto big = top_k_eigenvalues(t, 17);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(small.values[i], big.values[i], 1e-11);
}

TEST(TopK, Errors) {
    TridiagonalMatrix t{{0, 0}, {1}};
    EXPECT_THROW(top_k_eigenvalues(t, 3), std::domain_error);
    EXPECT_THROW(top_k_eigenvalues(t, 0), std::domain_error);
    EXPECT_THROW(top_k_eigenvalues(t, 1, 0.0), std::domain_error);
}

TEST(TopK, RepeatedEigenvalues) {
    TridiagonalMatrix t{{2, 2, 2, -1}, {0, 0, 0}};
    auto s = top_k_eigenvalues(t, 4);
    EXPECT_NEAR(s.values[0], 2, 1e-12);
    EXPECT_NEAR(s.values[2], 2, 1e-12);
    EXPECT_NEAR(s.values[3], -1, 1e-12);
}

TEST(EigenvaluesAbove, MatchesOracleAndRespectsCap) {
    std::mt19937_64 g(7);
    auto t = random_matrix(40, g);
    auto ev = dense_eigenvalues(t);
    auto s = eigenvalues_above(t, 0.5);
    auto expect = std::count_if(ev.begin(), ev.end(), [](double v) { return v >= 0.5; });
    ASSERT_EQ(static_cast<long>(s.values.size()), expect);
    for (std::size_t i = 0; i < s.values.size(); ++i) EXPECT_NEAR(s.values[i], ev[i], 1e-10);
    EXPECT_THROW(eigenvalues_above(t, -100.0, 1e-12, 10), std::runtime_error);
    EXPECT_TRUE(eigenvalues_above(t, 100.0).values.empty());
}

TEST(FullSpectrum, DiagonalIsExact) {
    TridiagonalMatrix t{{3, -1, 2, 0.5}, {0, 0, 0}};
    auto s = full_spectrum(t);
    EXPECT_EQ(s.values, (std::vector<double>{3, 2, 0.5, -1}));
}

TEST(FullSpectrum, MatchesDenseOracle) {
    std::mt19937_64 g(8);
    auto t = random_matrix(12, g);
    auto ev = dense_eigenvalues(t);
    auto s = full_spectrum(t);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(s.values[i], ev[i], 1e-10);
}

TEST(FullSpectrum, TraceAndFrobenius) {
    std::mt19937_64 g(9);
    for (std::size_t n : {1u, 2u, 17u, 200u}) {
        auto t = random_matrix(n, g);
        auto s = full_spectrum(t);
        double tr = 0, fro = 0, sv = 0, sv2 = 0;
        for (double d : t.diag) tr += d, fro += d * d;
        for (double e : t.offdiag) fro += 2 * e * e;
        for (double v : s.values) sv += v, sv2 += v * v;
        EXPECT_NEAR(sv, tr, 1e-8 * n);
        EXPECT_NEAR(sv2, fro, 1e-8 * n);
    }
}

TEST(FullSpectrum, ValuesInsideGershgorin) {
    std::mt19937_64 g(10);
    auto t = random_matrix(60, g);
    auto gi = gershgorin(t);
    auto s = full_spectrum(t);
    for (double v : s.values) {
        EXPECT_GE(v, gi.lower - 1e-12);
        EXPECT_LE(v, gi.upper + 1e-12);
    }
    EXPECT_TRUE(std::is_sorted(s.values.begin(), s.values.end(), std::greater<>()));
}

TEST(LogAbsDetShifted, EqualsSumOverSpectrum) {
    std::mt19937_64 g(11);
    auto t = random_matrix(25, g);
    auto ev = dense_eigenvalues(t);
    for (double x : {-0.3, 0.77, 2.5}) {
        double s = 0;
        for (double v : ev) s += std::log(std::fabs(v - x));
        EXPECT_NEAR(log_abs_det_shifted(t, x), s, 1e-9);
    }
}

// oracle equivalence over 200 random instances, n <= 50
TEST(OracleEquivalence, TwoHundredRandomMatrices) {
    std::mt19937_64 g(12);
    std::uniform_int_distribution<std::size_t> dn(1, 50);
    for (int rep = 0; rep < 200; ++rep) {
        auto t = random_matrix(dn(g), g);
        auto ev = dense_eigenvalues(t);
        auto full = full_spectrum(t);
        std::size_t k = std::min<std::size_t>(t.size(), 1 + rep % 8);
        auto top = top_k_eigenvalues(t, k);
        for (std::size_t i = 0; i < t.size(); ++i) ASSERT_NEAR(full.values[i], ev[i], 1e-10);
        for (std::size_t i = 0; i < k; ++i) ASSERT_NEAR(top.values[i], ev[i], 1e-10);
    }
}
