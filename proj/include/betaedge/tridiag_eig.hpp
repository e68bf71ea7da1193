#pragma once

#include "betaedge/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaedge {

inline constexpr double default_eig_tol = 1e-12;

struct Spectrum {
    std::vector<double> values; // descending
    std::size_t n = 0;
    bool converged = true;
    double tol = default_eig_tol;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, Spectrum partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const Spectrum& partial() const { return partial_; }

private:
    Spectrum partial_;
};

struct GershgorinInterval {
    double lower;
    double upper;
    double radius() const { return std::max(std::fabs(lower), std::fabs(upper)); }
};

inline GershgorinInterval gershgorin(const TridiagonalMatrix& t) {
    t.validate();
    const std::size_t n = t.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(t.offdiag[i - 1]);
        if (i + 1 < n) r += std::fabs(t.offdiag[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    return {lo, hi};
}

namespace detail {

inline double pivot_floor(const TridiagonalMatrix& t) {
    return std::numeric_limits<double>::epsilon() * std::max(1.0, gershgorin(t).radius());
}

// Counts below each shift in one pass over the matrix; the inner loop over
// shifts has no branches so it vectorizes.
inline void sturm_counts(const std::vector<double>& diag, const std::vector<double>& off_sq, double piv,
                         const double* shifts, std::size_t m, std::size_t* counts, std::vector<double>& q) {
    q.assign(m, 1.0);
    std::fill(counts, counts + m, std::size_t{0});
    const std::size_t n = diag.size();
    for (std::size_t j = 0; j < m; ++j) {
        double v = diag[0] - shifts[j];
        v = std::fabs(v) < piv ? piv : v;
        q[j] = v;
        counts[j] += v < 0.0;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double d = diag[i];
        const double e2 = off_sq[i - 1];
        double* qp = q.data();
        for (std::size_t j = 0; j < m; ++j) {
            double v = (d - shifts[j]) - e2 / qp[j];
            v = std::fabs(v) < piv ? piv : v;
            qp[j] = v;
            counts[j] += v < 0.0;
        }
    }
}

inline std::vector<double> squares(const std::vector<double>& v) {
    std::vector<double> s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i] * v[i];
    return s;
}

struct Bracket {
    double lo, hi;
    std::size_t clo, chi; // eigenvalues below lo / below hi
};

// Bisection for ascending eigenvalue indices j >= first inside [lo, hi).
// Every pass evaluates all midpoints together.
inline Spectrum bisect(const TridiagonalMatrix& t, std::size_t first, Bracket start, double tol) {
    const std::size_t n = t.size();
    const double abs_tol = tol * std::max(1.0, gershgorin(t).radius());
    const double piv = pivot_floor(t);
    const auto off_sq = squares(t.offdiag);
    std::vector<double> found(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<Bracket> active;
    if (start.chi > start.clo && start.chi > first) active.push_back(start);
    std::vector<double> mids, q;
    std::vector<std::size_t> counts;
    bool converged = true;
    auto settle = [&](const Bracket& b) {
        double mid = 0.5 * (b.lo + b.hi);
        for (std::size_t j = std::max(b.clo, first); j < b.chi; ++j) found[j] = mid;
    };
    for (int pass = 0; !active.empty(); ++pass) {
        std::vector<Bracket> open;
        for (const auto& b : active) {
            if (b.hi - b.lo < abs_tol) settle(b);
            else open.push_back(b);
        }
        if (open.empty()) break;
        if (pass > 200) {
            converged = false;
            for (const auto& b : open) settle(b);
            break;
        }
        mids.resize(open.size());
        counts.resize(open.size());
        for (std::size_t i = 0; i < open.size(); ++i) mids[i] = 0.5 * (open[i].lo + open[i].hi);
        sturm_counts(t.diag, off_sq, piv, mids.data(), mids.size(), counts.data(), q);
        active.clear();
        for (std::size_t i = 0; i < open.size(); ++i) {
            const auto& b = open[i];
            std::size_t c = std::clamp(counts[i], b.clo, b.chi);
            Bracket left{b.lo, mids[i], b.clo, c};
            Bracket right{mids[i], b.hi, c, b.chi};
            if (left.chi > left.clo && left.chi > first) active.push_back(left);
            if (right.chi > right.clo && right.chi > first) active.push_back(right);
        }
    }
    Spectrum s;
    s.n = n;
    s.tol = tol;
    s.converged = converged;
    for (std::size_t j = n; j-- > first;) {
        if (!std::isnan(found[j])) s.values.push_back(found[j]);
    }
    std::sort(s.values.begin(), s.values.end(), std::greater<>());
    return s;
}

} // namespace detail

// Number of eigenvalues strictly below x.
inline std::size_t sturm_count(const TridiagonalMatrix& t, double x) {
    if (!std::isfinite(x)) throw std::domain_error("sturm_count: x must be finite");
    t.validate();
    const double piv = detail::pivot_floor(t);
    double q = t.diag[0] - x;
    if (std::fabs(q) < piv) q = piv;
    std::size_t count = q < 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double e = t.offdiag[i - 1];
        q = (t.diag[i] - x) - e * e / q;
        if (std::fabs(q) < piv) q = piv;
        count += q < 0.0;
    }
    return count;
}

// log |det(T - x I)| from the same pivot recurrence.
inline double log_abs_det_shifted(const TridiagonalMatrix& t, double x) {
    t.validate();
    const double piv = detail::pivot_floor(t);
    double q = t.diag[0] - x;
    if (std::fabs(q) < piv) q = piv;
    double s = std::log(std::fabs(q));
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double e = t.offdiag[i - 1];
        q = (t.diag[i] - x) - e * e / q;
        if (std::fabs(q) < piv) q = piv;
        s += std::log(std::fabs(q));
    }
    return s;
}

inline Spectrum top_k_eigenvalues(const TridiagonalMatrix& t, std::size_t k, double tol = default_eig_tol) {
    t.validate();
    const std::size_t n = t.size();
    if (k < 1 || k > n) throw std::domain_error("top_k_eigenvalues: need 1 <= k <= n");
    if (!(tol > 0.0)) throw std::domain_error("top_k_eigenvalues: tol must be positive");
    auto g = gershgorin(t);
    double pad = std::max(1.0, g.radius()) * 1e-10 + 1e-300;
    double lo = g.lower - pad, hi = g.upper + pad;
    return detail::bisect(t, n - k, {lo, hi, sturm_count(t, lo), sturm_count(t, hi)}, tol);
}

// All eigenvalues >= threshold, descending. Throws if there are more than max_count.
inline Spectrum eigenvalues_above(const TridiagonalMatrix& t, double threshold, double tol = default_eig_tol,
                                  std::size_t max_count = std::numeric_limits<std::size_t>::max()) {
    t.validate();
    if (!(tol > 0.0)) throw std::domain_error("eigenvalues_above: tol must be positive");
    const std::size_t n = t.size();
    auto g = gershgorin(t);
    double hi = g.upper + std::max(1.0, g.radius()) * 1e-10 + 1e-300;
    std::size_t c = sturm_count(t, threshold);
    if (n - c > max_count)
        throw std::runtime_error("eigenvalues_above: " + std::to_string(n - c) + " eigenvalues exceed max_count " +
                                 std::to_string(max_count) + "; increase k");
    if (threshold >= hi || c == n) {
        Spectrum s;
        s.n = n;
        s.tol = tol;
        return s;
    }
    return detail::bisect(t, c, {threshold, hi, c, sturm_count(t, hi)}, tol);
}

// Implicit-shift QL, values only.
inline Spectrum full_spectrum(const TridiagonalMatrix& t, double tol = default_eig_tol) {
    t.validate();
    const std::size_t n = t.size();
    std::vector<double> d = t.diag;
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = t.offdiag[i];
    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0, tst1 = 0.0;
    bool ok = true;
    for (std::size_t l = 0; l < n && ok; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        std::size_t m = l;
        while (m < n && std::fabs(e[m]) > eps * tst1) ++m;
        if (m == n) m = n - 1;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 60) {
                    ok = false;
                    break;
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;
                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Spectrum s;
    s.n = n;
    s.tol = tol;
    s.converged = ok;
    s.values = std::move(d);
    std::sort(s.values.begin(), s.values.end(), std::greater<>());
    if (!ok) throw ConvergenceError("full_spectrum: QL iteration budget exhausted", std::move(s));
    return s;
}

} // namespace betaedge
