#pragma once

#include "betaedge/rng.hpp"
#include "betaedge/scaling.hpp"
#include "betaedge/special.hpp"
#include "betaedge/tridiag_eig.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace betaedge {

struct PointPattern {
    std::vector<double> points; // ascending
    Interval window;
    std::int64_t replica_id = 0;
};

struct DetailRow {
    std::string label;
    std::vector<std::pair<std::string, double>> values;
    bool passed = true;
};

// passed <=> |observed - reference| <= tolerance, unless rule says otherwise
struct TestReport {
    std::string statistic_name;
    double observed = 0;
    double reference = 0;
    double tolerance = 0;
    std::string rule = "abs_diff_le";
    std::size_t n_replicas = 0;
    bool passed = false;
    std::vector<DetailRow> details;
};

namespace detail {

inline void check_complete(const Spectrum& s, double edge) {
    if (s.values.size() < s.n && (s.values.empty() || s.values.back() >= edge))
        throw std::runtime_error("extract_pattern: spectrum may miss in-window eigenvalues; request a larger k");
}

inline PointPattern filter(const Spectrum& s, const ScalingConstants& sc, const Interval& w, std::int64_t id) {
    PointPattern p;
    p.window = w;
    p.replica_id = id;
    for (double x : rescale_points(s.values, sc))
        if (x >= w.lo && x <= w.hi) p.points.push_back(x);
    std::sort(p.points.begin(), p.points.end());
    return p;
}

} // namespace detail

// Completeness from the spectrum alone: a truncated spectrum must reach below the window.
inline PointPattern extract_pattern(const Spectrum& s, const ScalingConstants& sc, const Interval& window,
                                    std::int64_t replica_id = 0) {
    detail::check_complete(s, inverse_rescale(window.lo, sc));
    return detail::filter(s, sc, window, replica_id);
}

// Completeness by a Sturm count on the source matrix.
inline PointPattern extract_pattern(const Spectrum& s, const TridiagonalMatrix& t, const ScalingConstants& sc,
                                    const Interval& window, std::int64_t replica_id = 0) {
    const double edge = inverse_rescale(window.lo, sc);
    const std::size_t above = t.size() - sturm_count(t, edge);
    const auto have = static_cast<std::size_t>(std::count_if(s.values.begin(), s.values.end(), [&](double v) { return v >= edge; }));
    if (have < above)
        throw std::runtime_error("extract_pattern: " + std::to_string(above - have) +
                                 " in-window eigenvalues missing; request a larger k");
    return detail::filter(s, sc, window, replica_id);
}

// Maps the pattern through its cumulative intensity onto [0, Lambda(hi)].
inline PointPattern time_change(const PointPattern& p, const Intensity& intensity) {
    PointPattern out;
    out.replica_id = p.replica_id;
    out.window = {0.0, intensity.cumulative(p.window.lo, p.window.hi)};
    out.points.reserve(p.points.size());
    for (double x : p.points) out.points.push_back(intensity.cumulative(p.window.lo, x));
    return out;
}

// Equal-mass partition of a window into `count` cells.
inline std::vector<Interval> equal_mass_cells(const Interval& w, const Intensity& intensity, std::size_t count) {
    if (count < 1) throw std::domain_error("equal_mass_cells: count must be >= 1");
    const double total = intensity.cumulative(w.lo, w.hi);
    std::vector<Interval> cells;
    double lo = w.lo;
    for (std::size_t i = 1; i <= count; ++i) {
        double hi = w.hi;
        if (i < count) {
            const double target = total * static_cast<double>(i) / static_cast<double>(count);
            double a = lo, b = std::isinf(w.hi) ? lo + 1.0 : w.hi;
            while (intensity.cumulative(w.lo, b) < target) b = lo + 2.0 * (b - lo);
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (a + b);
                (intensity.cumulative(w.lo, m) < target ? a : b) = m;
            }
            hi = 0.5 * (a + b);
        }
        cells.push_back({lo, hi});
        lo = hi;
    }
    return cells;
}

// default: cells carrying about two expected points each
inline std::vector<Interval> default_cells(const Interval& w, const Intensity& intensity) {
    const double total = intensity.cumulative(w.lo, w.hi);
    return equal_mass_cells(w, intensity, std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(total / 2.0))));
}

struct CountTestOptions {
    double significance = 0.01; // familywise, split evenly over cells
    double fano_lo = 0.85;
    double fano_hi = 1.15;
    double cov_sigmas = 3.0;
    std::size_t min_replicas = 500;
};

namespace detail {

inline void require_replicas(std::size_t have, std::size_t need) {
    if (have < need)
        throw std::domain_error("test requires at least " + std::to_string(need) + " replicas, got " + std::to_string(have));
}

inline double poisson_pmf(double mu, int j) { return std::exp(-mu + j * std::log(mu) - std::lgamma(j + 1.0)); }

} // namespace detail

inline TestReport count_test(const std::vector<PointPattern>& patterns, const std::vector<Interval>& cells,
                             const Intensity& intensity, const CountTestOptions& opt = {}) {
    detail::require_replicas(patterns.size(), opt.min_replicas);
    if (cells.empty()) throw std::domain_error("count_test: no cells");
    const std::size_t R = patterns.size(), C = cells.size();
    std::vector<std::vector<double>> counts(C, std::vector<double>(R));
    for (std::size_t r = 0; r < R; ++r) {
        const auto& pts = patterns[r].points;
        for (std::size_t c = 0; c < C; ++c) {
            auto lo = std::lower_bound(pts.begin(), pts.end(), cells[c].lo);
            auto hi = c + 1 == C ? std::upper_bound(pts.begin(), pts.end(), cells[c].hi)
                                 : std::lower_bound(pts.begin(), pts.end(), cells[c].hi);
            counts[c][r] = static_cast<double>(hi - lo);
        }
    }
    TestReport rep;
    rep.statistic_name = "poisson_counts";
    rep.n_replicas = R;
    rep.rule = "failed_checks_eq_0";
    const double per_cell = opt.significance / static_cast<double>(C);
    const boost::math::chi_squared chi3(3.0);
    const double RR = static_cast<double>(R);
    std::vector<double> means(C);
    std::size_t failed = 0;
    for (std::size_t c = 0; c < C; ++c) {
        const double mu = expected_count(cells[c], intensity);
        double obs[4] = {0, 0, 0, 0};
        double sum = 0, sum2 = 0;
        for (double v : counts[c]) {
            obs[std::min(3, static_cast<int>(v))] += 1;
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / RR;
        means[c] = mean;
        const double var = (sum2 - RR * mean * mean) / (RR - 1.0);
        const double fano = mean > 0 ? var / mean : std::numeric_limits<double>::quiet_NaN();
        double expect[4];
        expect[0] = detail::poisson_pmf(mu, 0);
        expect[1] = detail::poisson_pmf(mu, 1);
        expect[2] = detail::poisson_pmf(mu, 2);
        expect[3] = std::max(0.0, 1.0 - expect[0] - expect[1] - expect[2]);
        double chi2 = 0;
        for (int j = 0; j < 4; ++j) {
            const double e = expect[j] * RR;
            chi2 += e > 0 ? (obs[j] - e) * (obs[j] - e) / e : (obs[j] > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        }
        const double pval = std::isfinite(chi2) ? boost::math::cdf(boost::math::complement(chi3, chi2)) : 0.0;
        const bool ok = pval >= per_cell && fano >= opt.fano_lo && fano <= opt.fano_hi;
        if (!ok) ++failed;
        rep.details.push_back({"cell[" + std::to_string(c) + "]",
                               {{"lo", cells[c].lo}, {"hi", cells[c].hi}, {"expected_mean", mu}, {"mean", mean},
                                {"mean_z", (mean - mu) / std::sqrt(std::max(mu, 1e-300) / RR)}, {"fano", fano},
                                {"chi2", chi2}, {"p_value", pval}, {"p_threshold", per_cell}},
                               ok});
    }
    // adjacent disjoint cells should be uncorrelated
    for (std::size_t c = 0; c + 1 < C; ++c) {
        double cov = 0;
        for (std::size_t r = 0; r < R; ++r) cov += (counts[c][r] - means[c]) * (counts[c + 1][r] - means[c + 1]);
        cov /= RR - 1.0;
        double v = 0;
        for (std::size_t r = 0; r < R; ++r) {
            const double prod = (counts[c][r] - means[c]) * (counts[c + 1][r] - means[c + 1]) - cov;
            v += prod * prod;
        }
        const double se = std::sqrt(v / (RR - 1.0) / RR);
        const bool ok = std::fabs(cov) <= opt.cov_sigmas * se;
        if (!ok) ++failed;
        rep.details.push_back({"cov[" + std::to_string(c) + "," + std::to_string(c + 1) + "]",
                               {{"covariance", cov}, {"std_error", se}}, ok});
    }
    rep.observed = static_cast<double>(failed);
    rep.reference = 0;
    rep.tolerance = 0;
    rep.passed = failed == 0;
    return rep;
}

// sup |F_m - F| by order statistics
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / m - f, f - static_cast<double>(i) / m});
    }
    return std::clamp(d, 0.0, 1.0);
}

// CDF of a pooled uncensored gap of a rate-1 process observed on [0, T]
inline double censored_gap_cdf(double g, double T) {
    if (g <= 0.0) return 0.0;
    if (std::isinf(T)) return -std::expm1(-g);
    if (g >= T) return 1.0;
    return 1.0 - std::exp(-g) * (1.0 - g / T);
}

struct SpacingTestOptions {
    double threshold = 0.05;
    std::size_t min_replicas = 500;
};

inline TestReport spacing_test(const std::vector<PointPattern>& patterns, const Intensity& intensity,
                               const SpacingTestOptions& opt = {}) {
    detail::require_replicas(patterns.size(), opt.min_replicas);
    std::vector<double> gaps;
    double T = 0;
    for (std::size_t r = 0; r < patterns.size(); ++r) {
        auto tc = time_change(patterns[r], intensity);
        if (r == 0) T = tc.window.hi;
        else if (std::fabs(tc.window.hi - T) > 1e-12 * std::max(1.0, T))
            throw std::domain_error("spacing_test: patterns must share one window");
        double prev = 0.0;
        for (double y : tc.points) {
            gaps.push_back(y - prev);
            prev = y;
        }
    }
    TestReport rep;
    rep.statistic_name = "time_changed_spacing_ks";
    rep.n_replicas = patterns.size();
    rep.rule = "observed_lt_tolerance";
    rep.tolerance = opt.threshold;
    if (gaps.empty()) {
        rep.observed = 1.0;
        rep.passed = false;
        rep.details.push_back({"gaps", {{"count", 0.0}, {"window_mass", T}}, false});
        return rep;
    }
    rep.observed = ks_statistic(gaps, [T](double g) { return censored_gap_cdf(g, T); });
    rep.passed = rep.observed < opt.threshold;
    const double m = static_cast<double>(gaps.size());
    rep.details.push_back({"gaps",
                           {{"count", m}, {"window_mass", T}, {"mean_gap", std::accumulate(gaps.begin(), gaps.end(), 0.0) / m},
                            {"asymptotic_p", kolmogorov_sf(std::sqrt(m) * rep.observed)}},
                           rep.passed});
    return rep;
}

inline TestReport test_gumbel_max(const std::vector<double>& maxima, double threshold = 0.05) {
    if (maxima.empty()) throw std::domain_error("test_gumbel_max: empty input");
    TestReport rep;
    rep.statistic_name = "gumbel_max_ks";
    rep.n_replicas = maxima.size();
    rep.rule = "observed_lt_tolerance";
    rep.tolerance = threshold;
    rep.observed = ks_statistic(maxima, gumbel_cdf);
    rep.passed = rep.observed < threshold;
    rep.details.push_back({"ks", {{"asymptotic_p", kolmogorov_sf(std::sqrt(static_cast<double>(maxima.size())) * rep.observed)}}, rep.passed});
    return rep;
}

inline TestReport empirical_spectral_ks(const std::vector<Spectrum>& spectra, double threshold = 0.02) {
    std::vector<double> pool;
    for (const auto& s : spectra) pool.insert(pool.end(), s.values.begin(), s.values.end());
    if (pool.empty()) throw std::domain_error("empirical_spectral_ks: no eigenvalues");
    TestReport rep;
    rep.statistic_name = "spectral_measure_ks";
    rep.n_replicas = spectra.size();
    rep.rule = "observed_lt_tolerance";
    rep.tolerance = threshold;
    rep.observed = ks_statistic(std::move(pool), normal_cdf);
    rep.passed = rep.observed < threshold;
    return rep;
}

// Poisson pattern with the given intensity on a finite-mass window.
inline PointPattern sample_poisson_pattern(const Interval& w, const Intensity& intensity, RngStream& rng,
                                           std::int64_t replica_id = 0) {
    PointPattern p;
    p.window = w;
    p.replica_id = replica_id;
    const double mass = intensity.cumulative(w.lo, w.hi);
    const auto count = rng.poisson(mass);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double target = rng.uniform() * mass;
        double x;
        if (intensity.kind == Intensity::Kind::homogeneous) {
            x = w.lo + target;
        } else if (intensity.kind == Intensity::Kind::inhomogeneous) {
            x = -intensity.delta * std::log(std::exp(-w.lo / intensity.delta) - target / intensity.delta);
        } else {
            double a = w.lo, b = std::isinf(w.hi) ? w.lo + 1.0 : w.hi;
            while (intensity.cumulative(w.lo, b) < target) b += b - w.lo;
            for (int it = 0; it < 100; ++it) {
                double m = 0.5 * (a + b);
                (intensity.cumulative(w.lo, m) < target ? a : b) = m;
            }
            x = 0.5 * (a + b);
        }
        p.points.push_back(std::clamp(x, w.lo, w.hi));
    }
    std::sort(p.points.begin(), p.points.end());
    return p;
}

} // namespace betaedge
