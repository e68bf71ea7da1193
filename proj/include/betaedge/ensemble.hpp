#pragma once

#include "betaedge/rng.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace betaedge {

struct EnsembleParams {
    std::size_t n = 1;
    double beta = 0.0;
    double alpha = 1.0;

    void validate() const {
        if (n < 1) throw std::domain_error("ensemble: n must be >= 1");
        if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("ensemble: beta must be >= 0");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("ensemble: alpha must be > 0");
    }
};

// Symmetric tridiagonal matrix as two flat arrays.
struct TridiagonalMatrix {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const { return diag.size(); }

    void validate() const {
        if (diag.empty()) throw std::domain_error("tridiagonal: empty matrix");
        if (offdiag.size() + 1 != diag.size()) throw std::domain_error("tridiagonal: offdiag must have n-1 entries");
    }
};

// X with X^2 ~ chi-square(k), any k > 0
inline double sample_chi(double k, RngStream& rng) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::domain_error("sample_chi: k must be positive and finite");
    return std::sqrt(2.0 * rng.gamma(0.5 * k));
}

// Dumitriu-Edelman model. All diagonal normals are drawn first so the diagonal
// matches sample_gaussian_iid under the same stream.
inline TridiagonalMatrix sample_tridiagonal(const EnsembleParams& p, RngStream& rng) {
    p.validate();
    if (p.beta == 0.0) throw std::domain_error("sample_tridiagonal: beta = 0, use sample_gaussian_iid");
    TridiagonalMatrix t;
    t.diag.resize(p.n);
    t.offdiag.resize(p.n - 1);
    const double sd = 1.0 / std::sqrt(p.alpha);
    for (auto& d : t.diag) d = rng.gaussian() * sd;
    const double so = 1.0 / std::sqrt(2.0 * p.alpha);
    for (std::size_t j = 0; j + 1 < p.n; ++j) {
        double m = static_cast<double>(p.n - 1 - j);
        t.offdiag[j] = sample_chi(m * p.beta, rng) * so;
    }
    return t;
}

inline std::vector<double> sample_gaussian_iid(std::size_t n, double alpha, RngStream& rng) {
    if (n < 1) throw std::domain_error("sample_gaussian_iid: n must be >= 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("sample_gaussian_iid: alpha must be > 0");
    std::vector<double> x(n);
    const double sd = 1.0 / std::sqrt(alpha);
    for (auto& v : x) v = rng.gaussian() * sd;
    return x;
}

} // namespace betaedge
