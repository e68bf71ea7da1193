#pragma once

#include "betaedge/ensemble.hpp"
#include "betaedge/parallel.hpp"
#include "betaedge/partition.hpp"
#include "betaedge/scaling.hpp"
#include "betaedge/special.hpp"
#include "betaedge/tridiag_eig.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace betaedge {

struct CorrelationMode {
    enum class Kind { exp_measure, lebesgue };
    Kind kind = Kind::exp_measure;
    double delta = 1.0;

    static CorrelationMode exp_measure(double delta) { return {Kind::exp_measure, delta}; }
    static CorrelationMode lebesgue() { return {Kind::lebesgue, 1.0}; }
    std::string name() const { return kind == Kind::exp_measure ? "exp_measure" : "lebesgue"; }
};

struct MeanEstimate {
    double mean = 0;
    double std_error = 0;
    std::size_t samples = 0;
};

struct CorrelationEstimate {
    std::size_t k = 0;
    std::vector<double> x;
    CorrelationMode mode;
    double value = 0;
    double std_error = 0;
    std::size_t m_samples = 0;
    double log_prefactor = 0;
    MeanEstimate tilde_r;
};

namespace detail {

inline MeanEstimate summarize(const std::vector<double>& v) {
    MeanEstimate e;
    e.samples = v.size();
    if (v.empty()) return e;
    CompensatedSum s;
    for (double x : v) s.add(x);
    const double m = static_cast<double>(v.size());
    e.mean = s.value() / m;
    if (v.size() > 1) {
        CompensatedSum ss;
        for (double x : v) ss.add((x - e.mean) * (x - e.mean));
        e.std_error = std::sqrt(ss.value() / (m - 1.0) / m);
    }
    return e;
}

} // namespace detail

// Every factor of the rescaled k-point correlation except the expectation term.
inline double log_prefactor(std::size_t n, const std::vector<double>& x, const ScalingConstants& sc,
                            const EnsembleParams& p, const CorrelationMode& mode) {
    const std::size_t k = x.size();
    if (k < 1 || k > n) throw std::domain_error("log_prefactor: need 1 <= k <= n");
    const double kk = static_cast<double>(k), nn = static_cast<double>(n);
    double r = log_falling_factorial(nn, kk);
    r -= (kk + p.beta * kk * (kk - 1.0) / 2.0) * std::log(sc.a_n);
    if (p.beta > 0.0) {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                const double d = std::fabs(x[i] - x[j]);
                if (d == 0.0) return -std::numeric_limits<double>::infinity();
                r += p.beta * std::log(d);
            }
    }
    r += k == n ? -log_partition({n, p.alpha, p.beta}) : log_partition_ratio(n, k, p.alpha, p.beta);
    for (double xi : x) {
        const double u = xi / sc.a_n + sc.b_n;
        r -= 0.5 * p.alpha * u * u;
        if (mode.kind == CorrelationMode::Kind::exp_measure) r += xi / mode.delta;
    }
    r += kk * p.beta * (nn - kk) * std::log(sc.b_n);
    return r;
}

// E over the (n-k)-ensemble of exp(beta sum_i sum_j log|1 + x_i/(a b) - z_j/b|).
// The inner sum over z_j is a shifted log-determinant, taken from the LDL pivots.
inline MeanEstimate estimate_tilde_R(std::size_t n, const std::vector<double>& x, const ScalingConstants& sc,
                                     const EnsembleParams& p, std::size_t m_samples, const SeedSpec& seeds,
                                     unsigned threads = 0) {
    if (x.size() > n) throw std::domain_error("estimate_tilde_R: k > n");
    if (p.beta == 0.0 || x.empty() || x.size() == n) return {1.0, 0.0, 0};
    if (m_samples < 100) throw std::domain_error("estimate_tilde_R: m_samples must be >= 100");
    const std::size_t m = n - x.size();
    EnsembleParams sub{m, p.beta, p.alpha};
    auto vals = parallel_map(m_samples, threads, [&](std::size_t r) {
        RngStream rng = seeds.stream(r);
        auto t = sample_tridiagonal(sub, rng);
        double s = 0.0;
        for (double xi : x) s += log_abs_det_shifted(t, sc.b_n + xi / sc.a_n) - static_cast<double>(m) * std::log(sc.b_n);
        return std::exp(p.beta * s);
    });
    return detail::summarize(vals);
}

inline CorrelationEstimate estimate_correlation(std::size_t n, const std::vector<double>& x, const ScalingConstants& sc,
                                                const EnsembleParams& p, const CorrelationMode& mode,
                                                std::size_t m_samples, const SeedSpec& seeds, unsigned threads = 0) {
    CorrelationEstimate e;
    e.k = x.size();
    e.x = x;
    e.mode = mode;
    e.m_samples = m_samples;
    e.log_prefactor = log_prefactor(n, x, sc, p, mode);
    if (std::isinf(e.log_prefactor)) return e;
    e.tilde_r = estimate_tilde_R(n, x, sc, p, m_samples, seeds, threads);
    const double f = std::exp(e.log_prefactor);
    e.value = f * e.tilde_r.mean;
    e.std_error = f * e.tilde_r.std_error;
    return e;
}

// Theta_K from the explicit uniform bound; c_delta = sup 1/delta_n
inline double log_theta_k(double K, double c_delta) {
    const double M = std::max(1.0, K);
    return 9.0 / 8.0 + 6.0 * std::log(2.0) + c_delta * M + (M * M + 2.0 * M) / 8.0 + std::log(M);
}

struct BoundProbeRow {
    std::size_t k = 0;
    std::vector<double> x;
    double value = 0;
    double std_error = 0;
    double bound = 0; // Theta_K^k
    bool passed = true;
    bool skipped = false;
    std::string reason;
};

struct BoundProbeReport {
    double log_theta = 0;
    std::vector<BoundProbeRow> rows;
    bool passed = true;
};

inline BoundProbeReport uniform_bound_probe(std::size_t n, double K, const std::vector<std::size_t>& k_list,
                                            const EnsembleParams& p, const ScalingConstants& sc,
                                            const CorrelationMode& mode, std::size_t m_samples, const SeedSpec& seeds,
                                            double c_delta, double cost_budget = 1e10, unsigned threads = 0) {
    BoundProbeReport rep;
    rep.log_theta = log_theta_k(K, c_delta);
    RngStream grid_rng(seeds.seed, seeds.stream_base + (std::uint64_t{1} << 40));
    for (std::size_t idx = 0; idx < k_list.size(); ++idx) {
        const std::size_t k = k_list[idx];
        BoundProbeRow row;
        row.k = k;
        row.bound = std::exp(static_cast<double>(k) * rep.log_theta);
        if (k < 1 || k > n) {
            row.skipped = true;
            row.reason = "k outside [1, n]";
            rep.rows.push_back(row);
            continue;
        }
        for (std::size_t i = 0; i < k; ++i) row.x.push_back(-K + 2.0 * K * grid_rng.uniform());
        const double cost = p.beta == 0.0 ? 0.0 : static_cast<double>(m_samples) * static_cast<double>(n - k + 1) * static_cast<double>(k);
        if (cost > cost_budget) {
            row.skipped = true;
            row.reason = "sampling cost exceeds budget";
            rep.rows.push_back(row);
            continue;
        }
        SeedSpec s{seeds.seed, seeds.stream_base + (static_cast<std::uint64_t>(idx + 1) << 32)};
        auto e = estimate_correlation(n, row.x, sc, p, mode, m_samples, s, threads);
        row.value = e.value;
        row.std_error = e.std_error;
        row.passed = std::isfinite(row.value) && row.value <= row.bound + 3.0 * row.std_error;
        rep.passed = rep.passed && row.passed;
        rep.rows.push_back(row);
    }
    return rep;
}

struct TailRow {
    double t = 0;
    std::size_t exceedances = 0;
    double probability = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    double exponent = 0; // lemma's Gaussian-decay exponent
    bool low_count = false;
};

struct TailProfile {
    std::vector<TailRow> rows;
    std::size_t m_samples = 0;
    double slope = 0;       // d log P / d exponent, fitted
    double slope_ratio = 0; // slope relative to the reference curve (or to the exponent itself)
    bool hypothesis_ok = true;
    bool monotone = true;
};

namespace detail {

// Wilson interval at 95%
inline std::pair<double, double> wilson(std::size_t hits, std::size_t m) {
    const double z = 1.959963984540054, nn = static_cast<double>(m), ph = static_cast<double>(hits) / nn;
    const double den = 1.0 + z * z / nn;
    const double c = (ph + z * z / (2.0 * nn)) / den;
    const double h = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / den;
    return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

// least squares slope of y on x
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= m;
    my /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

// largest eigenvalue of one replica; beta = 0 is the maximum of n normals
inline double sample_top(const EnsembleParams& p, RngStream& rng) {
    if (p.beta == 0.0) {
        const double sd = 1.0 / std::sqrt(p.alpha);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p.n; ++i) mx = std::max(mx, rng.gaussian() * sd);
        return mx;
    }
    return top_k_eigenvalues(sample_tridiagonal(p, rng), 1).values[0];
}

} // namespace detail

// Empirical P(lambda_max / b_n - u >= t) against the lemma's decay exponent.
// With a reference log-probability, the slope ratio compares both fits.
inline TailProfile tail_bound_profile(const EnsembleParams& p, const ScalingConstants& sc, double u,
                                      const std::vector<double>& t_grid, std::size_t m_samples, const SeedSpec& seeds,
                                      const std::function<double(double)>& log_reference = {}, unsigned threads = 0) {
    p.validate();
    TailProfile prof;
    prof.m_samples = m_samples;
    const double nn = static_cast<double>(p.n);
    prof.hypothesis_ok = nn * p.beta < 1.0 / small_parameter && p.alpha < 1.0 / small_parameter;
    auto tops = parallel_map(m_samples, threads, [&](std::size_t r) {
        RngStream rng = seeds.stream(r);
        return detail::sample_top(p, rng) / sc.b_n - u;
    });
    const double b2 = sc.b_n * sc.b_n;
    const double c = b2 - nn * p.beta / (4.0 * p.alpha);
    std::vector<double> fx, fy, fr;
    for (double t : t_grid) {
        TailRow row;
        row.t = t;
        row.exceedances = static_cast<std::size_t>(std::count_if(tops.begin(), tops.end(), [&](double v) { return v >= t; }));
        row.probability = static_cast<double>(row.exceedances) / static_cast<double>(m_samples);
        std::tie(row.ci_lo, row.ci_hi) = detail::wilson(row.exceedances, m_samples);
        const double w = t + b2 * u / c;
        row.exponent = -(p.alpha / 2.0) * c * c * w * w;
        row.low_count = row.exceedances < 10;
        if (!prof.rows.empty() && row.probability > prof.rows.back().probability) prof.monotone = false;
        if (row.exceedances > 0) {
            fx.push_back(row.exponent);
            fy.push_back(std::log(row.probability));
            if (log_reference) fr.push_back(log_reference(t));
        }
        prof.rows.push_back(row);
    }
    if (fx.size() >= 2) {
        prof.slope = detail::ls_slope(fx, fy);
        prof.slope_ratio = log_reference ? prof.slope / detail::ls_slope(fx, fr) : prof.slope;
    }
    return prof;
}

struct BulkRow {
    double y = 0;
    double probability = 0;
    double std_error = 0;
};

struct BulkProfile {
    std::vector<BulkRow> rows;
    double slope = 0; // fit p = slope * y through the origin
    double r_squared = 0;
    double log_growth = 0; // n alpha beta a^2 / (2 (4 alpha - beta))
};

// P(|lambda_1 - a| <= y) for a typical particle: fraction of eigenvalues within
// y of a, counted with two Sturm counts per replica.
inline BulkProfile bulk_bound_profile(const EnsembleParams& p, double a_center, const std::vector<double>& y_grid,
                                      std::size_t m_samples, const SeedSpec& seeds, unsigned threads = 0) {
    p.validate();
    for (double y : y_grid)
        if (!(y > 0.0 && y < 1.0)) throw std::domain_error("bulk_bound_profile: y must lie in (0, 1)");
    const double nn = static_cast<double>(p.n);
    auto fractions = parallel_map(m_samples, threads, [&](std::size_t r) {
        RngStream rng = seeds.stream(r);
        std::vector<double> f(y_grid.size());
        if (p.beta == 0.0) {
            auto x = sample_gaussian_iid(p.n, p.alpha, rng);
            for (std::size_t i = 0; i < y_grid.size(); ++i)
                f[i] = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return std::fabs(v - a_center) <= y_grid[i]; })) / nn;
        } else {
            auto t = sample_tridiagonal(p, rng);
            for (std::size_t i = 0; i < y_grid.size(); ++i) {
                auto hi = sturm_count(t, std::nextafter(a_center + y_grid[i], INFINITY));
                auto lo = sturm_count(t, a_center - y_grid[i]);
                f[i] = static_cast<double>(hi - lo) / nn;
            }
        }
        return f;
    });
    BulkProfile prof;
    prof.log_growth = nn * p.alpha * p.beta * a_center * a_center / (2.0 * (4.0 * p.alpha - p.beta));
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        std::vector<double> col(m_samples);
        for (std::size_t r = 0; r < m_samples; ++r) col[r] = fractions[r][i];
        auto e = detail::summarize(col);
        prof.rows.push_back({y_grid[i], e.mean, e.std_error});
        sxy += y_grid[i] * e.mean;
        sxx += y_grid[i] * y_grid[i];
    }
    prof.slope = sxx > 0 ? sxy / sxx : 0.0;
    double ss_res = 0, ss_tot = 0, mean = 0;
    for (const auto& row : prof.rows) mean += row.probability;
    mean /= std::max<std::size_t>(1, prof.rows.size());
    for (const auto& row : prof.rows) {
        ss_res += std::pow(row.probability - prof.slope * row.y, 2);
        ss_tot += std::pow(row.probability - mean, 2);
    }
    prof.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return prof;
}

// n beta E|log|1 + x/(a b) - lambda/b||, averaged over all eigenvalues
inline MeanEstimate jensen_quantity(const EnsembleParams& p, const ScalingConstants& sc, double x,
                                    std::size_t m_samples, const SeedSpec& seeds, unsigned threads = 0) {
    p.validate();
    if (p.beta == 0.0) return {0.0, 0.0, 0};
    const double nb = static_cast<double>(p.n) * p.beta;
    const double c = 1.0 + x / (sc.a_n * sc.b_n);
    auto vals = parallel_map(m_samples, threads, [&](std::size_t r) {
        RngStream rng = seeds.stream(r);
        auto s = full_spectrum(sample_tridiagonal(p, rng));
        CompensatedSum acc;
        for (double l : s.values) acc.add(std::fabs(std::log(std::fabs(c - l / sc.b_n))));
        return nb * acc.value() / static_cast<double>(s.values.size());
    });
    return detail::summarize(vals);
}

struct InequalityCheck {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

// |a + b|^beta <= 2^beta exp(beta (a^2 + b^2)/8), in log form
inline InequalityCheck check_lemma7_inequality(std::size_t trials, const SeedSpec& seeds, double spread = 6.0) {
    RngStream rng = seeds.stream(0);
    InequalityCheck c;
    c.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        const double a = spread * (2.0 * rng.uniform() - 1.0);
        const double b = spread * (2.0 * rng.uniform() - 1.0);
        double beta = 1.0 - rng.uniform(); // (0, 1]
        const double lhs = beta * std::log(std::fabs(a + b));
        const double rhs = beta * std::log(2.0) + beta * (a * a + b * b) / 8.0;
        const double margin = rhs - lhs;
        c.min_margin = std::min(c.min_margin, margin);
        if (margin < 0.0) ++c.violations;
    }
    return c;
}

} // namespace betaedge
