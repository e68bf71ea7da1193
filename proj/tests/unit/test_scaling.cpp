#include "betaedge/scaling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace betaedge;

TEST(ComputeScaling, ReferenceValuesN100) {
    auto sc = compute_scaling(100, DeltaSchedule::constant(1.0));
    // 50-digit evaluation of the closed forms
    EXPECT_NEAR(sc.a_n, 3.0348542587702927, 1e-14);
    EXPECT_NEAR(sc.b_n, 2.3662547929063940, 1e-14);
}

TEST(ComputeScaling, CenteringIdentity) {
    for (double n : {3.0, 10.0, 1e3, 1e6, 1e12}) {
        auto sc = compute_scaling(n, DeltaSchedule::constant(1.0));
        double s = std::sqrt(2 * std::log(n));
        EXPECT_NEAR(sc.b_n + (std::log(std::log(n)) + std::log(4 * std::numbers::pi)) / (2 * s), s, 1e-13 * s);
    }
}

TEST(ComputeScaling, StretchedScaleExceedsCentre) {
    auto sc = compute_scaling(1e4, DeltaSchedule::stretched(0.1));
    EXPECT_NEAR(sc.delta_n, std::exp(0.1 * std::sqrt(2 * std::log(1e4))), 1e-12);
    EXPECT_GT(sc.a_n, sc.b_n);
}

TEST(ComputeScaling, Errors) {
    EXPECT_THROW(compute_scaling(2, DeltaSchedule::constant(1)), std::domain_error);
    EXPECT_THROW(DeltaSchedule::constant(0), std::domain_error);
    EXPECT_THROW(DeltaSchedule::stretched(-1), std::domain_error);
}

TEST(ComputeScaling, CentreOverSqrt2LogNApproachesOne) {
    for (auto sched : {DeltaSchedule::constant(1), DeltaSchedule::power_log(1), DeltaSchedule::stretched(0.1)}) {
        double prev = 0;
        for (double e = 3; e <= 9; ++e) {
            double n = std::pow(10, e);
            auto sc = compute_scaling(n, sched);
            double r = sc.b_n / std::sqrt(2 * std::log(n));
            EXPECT_LT(r, 1.0);
            EXPECT_GT(r, prev);
            prev = r;
        }
    }
}

TEST(ComputeScaling, CentreOverScaleForConstantDelta) {
    // b_n/a_n = 1/(delta) + O(1/log n)
    for (double d : {0.5, 1.0, 3.0}) {
        auto sc = compute_scaling(1e300, DeltaSchedule::constant(d));
        EXPECT_NEAR(sc.b_n / sc.a_n, 1 / d, 0.01 / d);
    }
}

TEST(RescalePoints, AffineExamples) {
    auto sc = compute_scaling(1000, DeltaSchedule::constant(1.5));
    EXPECT_NEAR(rescale_points({sc.b_n}, sc)[0], 0.0, 1e-14);
    auto r = rescale_points({sc.b_n + 1 / sc.a_n, sc.b_n - 2 / sc.a_n}, sc);
    EXPECT_NEAR(r[0], 1.0, 1e-13);
    EXPECT_NEAR(r[1], -2.0, 1e-13);
    for (double lam : {-3.0, 0.0, 2.7, 4.1}) EXPECT_NEAR(inverse_rescale(rescale_points({lam}, sc)[0], sc), lam, 1e-12);
}

TEST(GumbelCdf, Values) {
    EXPECT_NEAR(gumbel_cdf(0), std::exp(-1.0), 1e-15);
    EXPECT_EQ(gumbel_cdf(INFINITY), 1.0);
    EXPECT_EQ(gumbel_cdf(-INFINITY), 0.0);
    EXPECT_NEAR(gumbel_cdf(-std::log(std::log(2.0))), 0.5, 1e-15);
    double prev = 0;
    for (double x = -5; x <= 10; x += 0.05) {
        double g = gumbel_cdf(x);
        EXPECT_GE(g, prev);
        EXPECT_GT(g, 0);
        EXPECT_LT(g, 1);
        prev = g;
    }
}

TEST(ExpectedCount, Examples) {
    EXPECT_NEAR(expected_count({0, INFINITY}, Intensity::inhomogeneous(1)), 1.0, 1e-15);
    EXPECT_NEAR(expected_count({-1, 2}, Intensity::homogeneous()), 3.0, 1e-15);
    EXPECT_NEAR(expected_count({0, 2}, Intensity::inhomogeneous(2)), 2 * (1 - std::exp(-1.0)), 1e-14);
    EXPECT_NEAR(expected_count({-3, 5}, Intensity::inhomogeneous(1)), std::exp(3.0) - std::exp(-5.0), 1e-12);
    EXPECT_THROW(expected_count({0, INFINITY}, Intensity::homogeneous()), std::domain_error);
    EXPECT_THROW(expected_count({1, 0}, Intensity::homogeneous()), std::domain_error);
}

TEST(ExpectedCount, DensityIntegratesToCumulative) {
    auto sc = compute_scaling(1e5, DeltaSchedule::constant(1));
    for (auto in : {Intensity::inhomogeneous(1.7), Intensity::finite_n_gaussian(sc)}) {
        double s = 0, h = 1e-3;
        for (double x = -2 + h / 2; x < 3; x += h) s += in.density(x) * h;
        EXPECT_NEAR(s, in.cumulative(-2, 3), 1e-5 * s);
    }
}

TEST(ExpectedCount, FiniteNGaussianApproachesLimit) {
    // relative error to the exponential limit shrinks with n
    double prev = INFINITY;
    for (double n : {1e3, 1e6, 1e12, 1e50}) {
        auto sc = compute_scaling(n, DeltaSchedule::constant(1));
        double fin = Intensity::finite_n_gaussian(sc).cumulative(-1, 2);
        double lim = Intensity::inhomogeneous(1).cumulative(-1, 2);
        double err = std::fabs(fin / lim - 1);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(MillsGap, DivergingDeltaReferenceValues) {
    // 40-digit references; the approach to y - x = 1 is logarithmically slow,
    // so n = 1e8 is still 36% short
    const std::pair<double, double> ref[] = {{8, 0.63510037658879525}, {16, 0.73000312006022112},
                                             {32, 0.81189552503152239}, {64, 0.87518422372314937},
                                             {128, 0.92031220907390607}};
    for (auto [e, v] : ref) {
        double n = std::pow(10.0, e);
        EXPECT_NEAR(mills_gap(n, 0, 1, compute_scaling(n, DeltaSchedule::power_log(1))), v, 1e-10) << e;
    }
}

TEST(MillsGap, Additive) {
    auto sc = compute_scaling(1e6, DeltaSchedule::power_log(1));
    double a = mills_gap(1e6, -1, 0.5, sc), b = mills_gap(1e6, 0.5, 2, sc), c = mills_gap(1e6, -1, 2, sc);
    EXPECT_NEAR(a + b, c, 1e-13 * c);
}

TEST(MillsGap, RatioTendsToOne) {
    double prev = INFINITY;
    for (double e : {4.0, 8.0, 16.0, 64.0}) {
        double n = std::pow(10, e);
        auto sc = compute_scaling(n, DeltaSchedule::power_log(1));
        double err = std::fabs(mills_gap(n, -1, 1, sc) / 2 - 1);
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(MillsGap, Errors) {
    auto sc = compute_scaling(100, DeltaSchedule::constant(1));
    EXPECT_THROW(mills_gap(100, 1, 1, sc), std::domain_error);
    EXPECT_THROW(mills_gap(2, 0, 1, sc), std::domain_error);
}

TEST(DeltaSchedule, GrowthCondition) {
    EXPECT_FALSE(DeltaSchedule::constant(1).growth_condition_violated(1e5));
    EXPECT_FALSE(DeltaSchedule::power_log(1).growth_condition_violated(1e5));
    EXPECT_LT(DeltaSchedule::power_log(1).growth_ratio(1e300), DeltaSchedule::power_log(1).growth_ratio(1e5));
    EXPECT_NEAR(DeltaSchedule::stretched(0.1).growth_ratio(1e5), 0.1 * std::sqrt(2.0), 1e-12);
    EXPECT_TRUE(DeltaSchedule::stretched(1).growth_condition_violated(1e5));
    EXPECT_EQ(DeltaSchedule::power_log(2).to_string(), "powlog:2");
}
