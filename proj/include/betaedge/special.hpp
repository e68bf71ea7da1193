#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace betaedge {

inline constexpr double euler_gamma = 0.57721566490153286061;

// log Gamma(1 + x) for x > -1; exact for tiny x where lgamma(1 + x) loses bits.
inline double log_gamma_1p(double x) {
    if (!(x > -1.0) || !std::isfinite(x)) throw std::domain_error("log_gamma_1p: x must be > -1");
    if (std::fabs(x) < 0.5) return std::log1p(boost::math::tgamma1pm1(x));
    return std::lgamma(1.0 + x);
}

// log Gamma(x) for x > 0
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("log_gamma: x must be positive");
    if (x < 0.5) return log_gamma_1p(x) - std::log(x);
    if (x < 1.5) return log_gamma_1p(x - 1.0);
    return std::lgamma(x);
}

// log(n! / (n - k)!); small k summed directly to avoid cancelling two huge lgammas
inline double log_falling_factorial(double n, double k) {
    if (k == std::floor(k) && k <= 64.0) {
        double s = 0.0;
        for (double i = 0; i < k; ++i) s += std::log(n - i);
        return s;
    }
    return std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0);
}

// upper tail of N(0, 1), never as 1 - cdf
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Asymptotic Kolmogorov tail P(sqrt(m) D > t).
inline double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    double p = 2.0 * s;
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

// Neumaier compensated sum
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v)) comp_ += (sum_ - t) + v;
        else comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace betaedge
