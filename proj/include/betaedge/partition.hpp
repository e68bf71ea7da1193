#pragma once

#include "betaedge/rng.hpp"
#include "betaedge/parallel.hpp"
#include "betaedge/special.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaedge {

// "much smaller than one" threshold used by the hypothesis flags
inline constexpr double small_parameter = 0.1;

struct PartitionQuery {
    std::size_t n = 1;
    double alpha = 1.0;
    double beta = 0.0;

    void validate() const {
        if (n < 1) throw std::domain_error("partition: n must be >= 1");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("partition: alpha must be > 0");
        if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("partition: beta must be >= 0");
    }
};

struct BoundCheck {
    double lhs = 0;
    double rhs = 0;
    bool satisfied = false;
    double margin = 0; // rhs - lhs
    double rounding = 0; // floating-point allowance applied to the comparison

    static BoundCheck make(double lhs, double rhs, double scale) {
        BoundCheck b;
        b.lhs = lhs;
        b.rhs = rhs;
        b.margin = rhs - lhs;
        b.rounding = 64.0 * std::numeric_limits<double>::epsilon() * (std::fabs(scale) + std::fabs(lhs) + std::fabs(rhs) + 1.0);
        b.satisfied = lhs <= rhs + b.rounding;
        return b;
    }
};

namespace detail {

// sum_{i=from}^{to} [lgamma(1 + i beta/2) - lgamma(1 + beta/2)]
inline double selberg_sum(std::size_t from, std::size_t to, double beta) {
    if (beta == 0.0 || to < from) return 0.0;
    const double g1 = log_gamma_1p(0.5 * beta);
    CompensatedSum s;
    for (std::size_t i = from; i <= to; ++i) s.add(log_gamma_1p(0.5 * beta * static_cast<double>(i)) - g1);
    return s.value();
}

inline double alpha_exponent(double n, double beta) { return beta * n * (n - 1.0) / 4.0 + n / 2.0; }

} // namespace detail

// Selberg closed form with arguments >= 1 in every log-Gamma
inline double log_partition(const PartitionQuery& q) {
    q.validate();
    const double n = static_cast<double>(q.n);
    if (q.beta == 0.0) return 0.5 * n * std::log(2.0 * std::numbers::pi / q.alpha);
    return 0.5 * n * std::log(2.0 * std::numbers::pi) - detail::alpha_exponent(n, q.beta) * std::log(q.alpha) +
           detail::selberg_sum(1, q.n, q.beta);
}

// Same integral through n! prod Gamma((i+1) beta/2) / Gamma(beta/2); beta > 0.
inline double log_partition_factorial_form(const PartitionQuery& q) {
    q.validate();
    if (q.beta == 0.0) throw std::domain_error("log_partition_factorial_form: beta must be > 0");
    const double n = static_cast<double>(q.n);
    const double g = log_gamma(0.5 * q.beta);
    CompensatedSum s;
    s.add(0.5 * n * std::log(2.0 * std::numbers::pi));
    s.add(std::lgamma(n + 1.0));
    s.add(-detail::alpha_exponent(n, q.beta) * std::log(q.alpha));
    for (std::size_t i = 0; i < q.n; ++i) s.add(log_gamma(0.5 * q.beta * static_cast<double>(i + 1)) - g);
    return s.value();
}

// log Z_{n-k} - log Z_n at equal alpha, beta, summed directly (no cancellation)
inline double log_partition_ratio(std::size_t n, std::size_t k, double alpha, double beta) {
    PartitionQuery{n, alpha, beta}.validate();
    if (k >= n) throw std::domain_error("log_partition_ratio: need k < n");
    const double kk = static_cast<double>(k), nn = static_cast<double>(n);
    double r = -0.5 * kk * std::log(2.0 * std::numbers::pi);
    r += (beta * kk * (2.0 * nn - kk - 1.0) / 4.0 + kk / 2.0) * std::log(alpha);
    r -= detail::selberg_sum(n - k + 1, n, beta);
    return r;
}

struct QuadratureSettings {
    enum class Method { automatic, tensor, monte_carlo };
    Method method = Method::automatic;
    double half_width = 12.0; // scaled by 1/sqrt(alpha) when alpha < 1
    double tolerance = 1e-10;
    std::size_t mc_draws = 10'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct OracleResult {
    double log_value = 0;
    double error = 0; // on log_value
    std::string method;
};

namespace detail {

// Tensor Gauss-Legendre over the ordered region. The centre of mass integrates
// out in closed form; the n-1 gaps g = s^2 are integrated on [0, S]^(n-1), the
// square-root substitution keeping g^beta smooth at the wall.
inline double gap_integral(const PartitionQuery& q, std::size_t panels, double S) {
    using rule = boost::math::quadrature::gauss<double, 30>;
    const std::size_t dims = q.n - 1;
    std::vector<double> s(dims), x(q.n);
    std::function<double(std::size_t)> level = [&](std::size_t d) -> double {
        if (d == dims) {
            x[0] = 0.0;
            for (std::size_t i = 0; i < dims; ++i) x[i + 1] = x[i] + s[i] * s[i];
            double mean = 0.0;
            for (double v : x) mean += v;
            mean /= static_cast<double>(q.n);
            double quad = 0.0, lv = 0.0, jac = 1.0;
            for (double v : x) quad += (v - mean) * (v - mean);
            for (std::size_t i = 0; i < q.n; ++i)
                for (std::size_t j = i + 1; j < q.n; ++j) lv += std::log(x[j] - x[i]);
            for (double v : s) jac *= 2.0 * v;
            return jac * std::exp(q.beta * lv - 0.5 * q.alpha * quad);
        }
        double total = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double a = S * static_cast<double>(p) / static_cast<double>(panels);
            const double b = S * static_cast<double>(p + 1) / static_cast<double>(panels);
            total += rule::integrate([&](double v) { s[d] = v; return level(d + 1); }, a, b);
        }
        return total;
    };
    return level(0);
}

inline OracleResult tensor_oracle(const PartitionQuery& q, const QuadratureSettings& set) {
    using rule = boost::math::quadrature::gauss<double, 30>;
    const double nn = static_cast<double>(q.n);
    OracleResult r;
    r.method = "gauss_legendre";
    if (q.n == 1) {
        // direct 1-D integral on [-L, L]
        const double L = set.half_width / std::sqrt(std::min(q.alpha, 1.0));
        auto f = [&](double v) { return std::exp(-0.5 * q.alpha * v * v); };
        double coarse = 0.0, fine = 0.0;
        for (int p = 0; p < 8; ++p) coarse += rule::integrate(f, -L + 2 * L * p / 8.0, -L + 2 * L * (p + 1) / 8.0);
        for (int p = 0; p < 12; ++p) fine += rule::integrate(f, -L + 2 * L * p / 12.0, -L + 2 * L * (p + 1) / 12.0);
        r.log_value = std::log(fine);
        r.error = std::fabs(fine - coarse) / fine + 1e-14;
        return r;
    }
    // gaps beyond G carry less than exp(-alpha G^2/4) of the weight
    const double G = std::sqrt(320.0 / q.alpha);
    const double S = std::sqrt(G);
    const double coarse = gap_integral(q, 3, S);
    const double fine = gap_integral(q, 4, S);
    // x = x_1 + offsets(g): the x_1 integral is a Gaussian of precision n alpha
    r.log_value = std::log(fine) + 0.5 * std::log(2.0 * std::numbers::pi / (nn * q.alpha)) + std::lgamma(nn + 1.0);
    r.error = std::fabs(fine - coarse) / fine + 1e-14;
    return r;
}

// Importance sampling from the Gaussian factor: Z = (2pi/alpha)^{n/2} E|Delta|^beta
inline OracleResult monte_carlo_oracle(const PartitionQuery& q, const QuadratureSettings& s) {
    const std::size_t chunks = 64;
    const std::size_t per = (s.mc_draws + chunks - 1) / chunks;
    struct Acc {
        double sum = 0, sum2 = 0;
        std::size_t count = 0;
    };
    auto parts = parallel_map(chunks, s.threads, [&](std::size_t c) {
        RngStream rng(s.seed, c);
        Acc a;
        const double sd = 1.0 / std::sqrt(q.alpha);
        std::vector<double> x(q.n);
        for (std::size_t d = 0; d < per; ++d) {
            for (auto& v : x) v = rng.gaussian() * sd;
            double lv = 0.0;
            for (std::size_t i = 0; i < q.n; ++i)
                for (std::size_t j = i + 1; j < q.n; ++j) lv += std::log(std::fabs(x[i] - x[j]));
            double w = std::exp(q.beta * lv);
            a.sum += w;
            a.sum2 += w * w;
            ++a.count;
        }
        return a;
    });
    Acc tot;
    for (const auto& a : parts) {
        tot.sum += a.sum;
        tot.sum2 += a.sum2;
        tot.count += a.count;
    }
    const double m = static_cast<double>(tot.count);
    const double mean = tot.sum / m;
    const double var = std::max(0.0, tot.sum2 / m - mean * mean) * m / (m - 1.0);
    OracleResult r;
    r.log_value = 0.5 * static_cast<double>(q.n) * std::log(2.0 * std::numbers::pi / q.alpha) + std::log(mean);
    r.error = std::sqrt(var / m) / mean;
    r.method = "monte_carlo";
    return r;
}

} // namespace detail

// Independent numerical evaluation of the defining integral.
inline OracleResult log_partition_oracle(const PartitionQuery& q, const QuadratureSettings& s = {}) {
    q.validate();
    using M = QuadratureSettings::Method;
    M method = s.method;
    if (method == M::automatic) method = q.n <= 4 ? M::tensor : M::monte_carlo;
    if (method == M::tensor) {
        if (q.n > 4) throw std::domain_error("log_partition_oracle: tensor quadrature supports n <= 4");
        return detail::tensor_oracle(q, s);
    }
    if (q.n > 8) throw std::domain_error("log_partition_oracle: Monte Carlo oracle supports n <= 8");
    return detail::monte_carlo_oracle(q, s);
}

struct ShiftRatio {
    double log_ratio = 0;
    double residual = 0;
    bool hypothesis_ok = true; // n beta small
};

// Z_{n-k} / Z_n against its limit (2 pi)^{-k/2} alpha^{k/2}
inline ShiftRatio ratio_shift_k(std::size_t n, std::size_t k, double alpha, double beta) {
    if (k >= n) throw std::domain_error("ratio_shift_k: need k < n");
    ShiftRatio r;
    r.log_ratio = k == 0 ? 0.0 : log_partition_ratio(n, k, alpha, beta);
    const double kk = static_cast<double>(k);
    r.residual = r.log_ratio - (-0.5 * kk * std::log(2.0 * std::numbers::pi) + 0.5 * kk * std::log(alpha));
    r.hypothesis_ok = static_cast<double>(n) * beta < small_parameter;
    return r;
}

// log Z_{n-k, alpha - k beta/(4 b^2)} - log Z_{n-k, alpha}; only the alpha power differs
inline double ratio_perturbed_alpha(std::size_t n, std::size_t k, double alpha, double beta, double b_n) {
    if (k >= n) throw std::domain_error("ratio_perturbed_alpha: need k < n");
    PartitionQuery{n, alpha, beta}.validate();
    const double shifted = alpha - static_cast<double>(k) * beta / (4.0 * b_n * b_n);
    if (!(shifted > 0.0)) throw std::domain_error("ratio_perturbed_alpha: perturbed alpha must be > 0");
    const double m = static_cast<double>(n - k);
    return -detail::alpha_exponent(m, beta) * std::log1p(-(alpha - shifted) / alpha);
}

struct Lemma5Constant {
    double log_c_proof = 0; // as written: 4^{x P} alpha^{beta(n-1)/2}
    double log_c = 0;       // times Gamma(1 + beta/2) / Gamma(1 + n beta/2)
};

inline Lemma5Constant lemma5_constant(std::size_t n, double alpha, double beta, double b_n) {
    const double nn = static_cast<double>(n);
    const double ab2 = alpha * b_n * b_n;
    Lemma5Constant c;
    c.log_c_proof = (beta * beta * (nn - 1.0) * (nn - 2.0) / (16.0 * ab2) + beta * (nn - 1.0) / (8.0 * ab2)) * std::log(4.0) +
                    0.5 * (nn - 1.0) * beta * std::log(alpha);
    c.log_c = c.log_c_proof + log_gamma_1p(0.5 * beta) - log_gamma_1p(0.5 * nn * beta);
    return c;
}

namespace detail {

inline void lemma5_pre(std::size_t n, double alpha, double beta, double b_n) {
    PartitionQuery{n, alpha, beta}.validate();
    if (n < 2) throw std::domain_error("check_lemma5_bound: need n >= 2");
    const double ab2 = alpha * b_n * b_n;
    if (!(ab2 - beta / 4.0 > 0.0)) throw std::domain_error("check_lemma5_bound: requires alpha*b_n^2 - beta/4 > 0");
    if (!(beta / 2.0 <= ab2)) throw std::domain_error("check_lemma5_bound: requires beta/2 <= alpha*b_n^2");
}

inline BoundCheck lemma5(std::size_t n, double alpha, double beta, double b_n, double log_c) {
    const double nn = static_cast<double>(n);
    const double ab2 = alpha * b_n * b_n;
    const double z1 = log_partition({n - 1, ab2 - beta / 4.0, beta});
    const double z0 = log_partition({n, alpha, beta});
    const double rhs = log_c + 0.5 * std::log(alpha / (2.0 * std::numbers::pi)) +
                       (-beta * (nn - 1.0) * (nn - 2.0) / 2.0 - nn + 1.0) * std::log(b_n);
    return BoundCheck::make(z1 - z0, rhs, std::fabs(z1) + std::fabs(z0));
}

} // namespace detail

inline BoundCheck check_lemma5_bound(std::size_t n, double alpha, double beta, double b_n) {
    detail::lemma5_pre(n, alpha, beta, b_n);
    return detail::lemma5(n, alpha, beta, b_n, lemma5_constant(n, alpha, beta, b_n).log_c);
}

// The same comparison with the constant exactly as the proof writes it.
inline BoundCheck check_lemma5_bound_proof_constant(std::size_t n, double alpha, double beta, double b_n) {
    detail::lemma5_pre(n, alpha, beta, b_n);
    return detail::lemma5(n, alpha, beta, b_n, lemma5_constant(n, alpha, beta, b_n).log_c_proof);
}

struct Lemma6Checks {
    BoundCheck perturbed; // <= 4^k
    BoundCheck shifted;   // <= (2/pi)^{k/2}
};

inline Lemma6Checks check_lemma6_bounds(std::size_t n, std::size_t k, double beta, double b_n) {
    PartitionQuery{n, 1.0, beta}.validate();
    if (k < 1 || k + 1 > n) throw std::domain_error("check_lemma6_bounds: need 1 <= k <= n-1");
    const double kk = static_cast<double>(k);
    if (!(kk * beta <= 2.0 * b_n * b_n)) throw std::domain_error("check_lemma6_bounds: requires k*beta <= 2 b_n^2");
    const double za = log_partition({n - k, 1.0 - kk * beta / (4.0 * b_n * b_n), beta});
    const double zb = log_partition({n - k, 1.0, beta});
    const double zc = log_partition({n, 1.0, beta});
    Lemma6Checks r;
    r.perturbed = BoundCheck::make(za - zb, kk * std::log(4.0), std::fabs(za) + std::fabs(zb));
    r.shifted = BoundCheck::make(zb - zc, 0.5 * kk * std::log(2.0 / std::numbers::pi), std::fabs(zb) + std::fabs(zc));
    return r;
}

struct ContiguityRatio {
    double exact = 0;
    double predicted = 0;   // (gamma/8) n^2 (beta' - beta)
    double first_order = 0; // (gamma/4) n (n-1) (beta' - beta), the small-beta expansion of exact
    bool hypothesis_ok = true;
};

inline ContiguityRatio contiguity_log_ratio(std::size_t n, double beta, double beta_prime) {
    PartitionQuery{n, 1.0, beta}.validate();
    PartitionQuery{n, 1.0, beta_prime}.validate();
    const double nn = static_cast<double>(n);
    ContiguityRatio r;
    r.exact = beta == beta_prime ? 0.0 : log_partition({n, 1.0, beta}) - log_partition({n, 1.0, beta_prime});
    r.predicted = euler_gamma / 8.0 * nn * nn * (beta_prime - beta);
    r.first_order = euler_gamma / 4.0 * nn * (nn - 1.0) * (beta_prime - beta);
    r.hypothesis_ok = nn * beta < small_parameter && nn * beta_prime < small_parameter;
    return r;
}

} // namespace betaedge
