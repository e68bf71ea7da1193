#pragma once

#include "betaedge/special.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaedge {

struct DeltaSchedule {
    enum class Kind { constant, power_log, stretched };
    Kind kind = Kind::constant;
    double param = 1.0; // delta, p or eps

    static DeltaSchedule constant(double delta) {
        if (!(delta > 0.0) || !std::isfinite(delta)) throw std::domain_error("DeltaSchedule: constant delta must be > 0");
        return {Kind::constant, delta};
    }
    static DeltaSchedule power_log(double p) {
        if (!std::isfinite(p)) throw std::domain_error("DeltaSchedule: p must be finite");
        return {Kind::power_log, p};
    }
    static DeltaSchedule stretched(double eps) {
        if (!(eps > 0.0) || !std::isfinite(eps)) throw std::domain_error("DeltaSchedule: eps must be > 0");
        return {Kind::stretched, eps};
    }

    double at(double n) const {
        switch (kind) {
        case Kind::constant: return param;
        case Kind::power_log: return std::pow(std::log(n), param);
        case Kind::stretched: return std::exp(param * std::sqrt(2.0 * std::log(n)));
        }
        return param;
    }

    // log(delta_n) / sqrt(log n); the beta > 0 limit needs this to vanish.
    double growth_ratio(double n) const { return std::log(at(n)) / std::sqrt(std::log(n)); }
    // flags schedules where log delta_n is no longer small against sqrt(log n)
    bool growth_condition_violated(double n) const { return growth_ratio(n) >= 1.0; }

    // sup over m in [3, n] of 1/delta_m; schedules are monotone so endpoints suffice
    double sup_inverse(double n) const { return std::max(1.0 / at(3.0), 1.0 / at(n)); }

    std::string to_string() const;
};

struct ScalingConstants {
    double n = 3;
    double a_n = 0;
    double b_n = 0;
    double delta_n = 1;
};

inline ScalingConstants compute_scaling(double n, const DeltaSchedule& sched) {
    if (!(n >= 3.0)) throw std::domain_error("compute_scaling: n must be >= 3");
    const double delta = sched.at(n);
    const double s = std::sqrt(2.0 * std::log(n));
    ScalingConstants sc;
    sc.n = n;
    sc.delta_n = delta;
    sc.a_n = delta * s;
    sc.b_n = s - (std::log(std::log(n)) + 2.0 * std::log(delta) + std::log(4.0 * std::numbers::pi)) / (2.0 * s);
    return sc;
}

inline std::vector<double> rescale_points(const std::vector<double>& lambdas, const ScalingConstants& sc) {
    std::vector<double> out(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = sc.a_n * (lambdas[i] - sc.b_n);
    return out;
}

inline double inverse_rescale(double x, const ScalingConstants& sc) { return sc.b_n + x / sc.a_n; }

inline double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

struct Interval {
    double lo = 0;
    double hi = 0;
};

// Limit intensities of the extreme process, plus the exact finite-n Gaussian
// intensity used for diagnostics.
struct Intensity {
    enum class Kind { homogeneous, inhomogeneous, finite_n_gaussian };
    Kind kind = Kind::homogeneous;
    double delta = 1.0;
    ScalingConstants sc{}; // finite_n_gaussian only
    double alpha = 1.0;

    static Intensity homogeneous() { return {Kind::homogeneous, 1.0, {}, 1.0}; }
    static Intensity inhomogeneous(double delta) {
        if (!(delta > 0.0)) throw std::domain_error("Intensity: delta must be > 0");
        return {Kind::inhomogeneous, delta, {}, 1.0};
    }
    // n * phi(sqrt(alpha)(b + x/a)) * sqrt(alpha)/a, i.e. beta = 0 at finite n
    static Intensity finite_n_gaussian(const ScalingConstants& sc, double alpha = 1.0) {
        return {Kind::finite_n_gaussian, sc.delta_n, sc, alpha};
    }

    // Lambda(lo, x) = mass of [lo, x]
    double cumulative(double lo, double x) const {
        switch (kind) {
        case Kind::homogeneous:
            if (std::isinf(x)) throw std::domain_error("expected_count: homogeneous intensity has infinite mass");
            return x - lo;
        case Kind::inhomogeneous:
            return delta * (std::exp(-lo / delta) - (std::isinf(x) ? 0.0 : std::exp(-x / delta)));
        case Kind::finite_n_gaussian: {
            const double r = std::sqrt(alpha);
            auto tail = [&](double v) { return std::isinf(v) ? 0.0 : normal_sf(r * (sc.b_n + v / sc.a_n)); };
            return sc.n * (tail(lo) - tail(x));
        }
        }
        return 0.0;
    }

    double density(double x) const {
        switch (kind) {
        case Kind::homogeneous: return 1.0;
        case Kind::inhomogeneous: return std::exp(-x / delta);
        case Kind::finite_n_gaussian: {
            const double r = std::sqrt(alpha);
            return sc.n * r / sc.a_n * normal_pdf(r * (sc.b_n + x / sc.a_n));
        }
        }
        return 0.0;
    }

    std::string name() const {
        switch (kind) {
        case Kind::homogeneous: return "homogeneous";
        case Kind::inhomogeneous: return "inhomogeneous";
        case Kind::finite_n_gaussian: return "finite_n_gaussian";
        }
        return "";
    }
};

inline double expected_count(const Interval& iv, const Intensity& intensity) {
    if (!(iv.lo <= iv.hi)) throw std::domain_error("expected_count: need lo <= hi");
    return intensity.cumulative(iv.lo, iv.hi);
}

inline double mills_gap(double n, double x, double y, const ScalingConstants& sc) {
    if (!(n >= 3.0)) throw std::domain_error("mills_gap: n must be >= 3");
    if (!(x < y)) throw std::domain_error("mills_gap: need x < y");
    return n * (normal_sf(x / sc.a_n + sc.b_n) - normal_sf(y / sc.a_n + sc.b_n));
}

inline std::string DeltaSchedule::to_string() const {
    char buf[64];
    const char* name = kind == Kind::constant ? "const" : kind == Kind::power_log ? "powlog" : "stretched";
    std::snprintf(buf, sizeof buf, "%s:%.17g", name, param);
    return buf;
}

} // namespace betaedge
