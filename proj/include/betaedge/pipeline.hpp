#pragma once

#include "betaedge/ensemble.hpp"
#include "betaedge/pointproc.hpp"
#include "betaedge/scaling.hpp"
#include "betaedge/tridiag_eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace betaedge {

// One rescaling of the same spectrum: scaling constants plus observation window.
struct PatternTarget {
    ScalingConstants sc;
    Interval window;
};

struct ReplicaSample {
    std::vector<PointPattern> patterns; // one per target
    std::vector<double> maxima;         // a_n (lambda_max - b_n) per target
    double lambda_max = 0;
};

// Samples one replica and extracts every requested pattern from a single
// spectrum. Only eigenvalues above the lowest window edge are computed: by
// bisection when at most k_cap lie there, by full QL when allow_full is set.
inline ReplicaSample sample_replica(const EnsembleParams& p, const std::vector<PatternTarget>& targets,
                                    std::size_t k_cap, bool allow_full, RngStream& rng, std::int64_t replica_id,
                                    double tol = default_eig_tol) {
    p.validate();
    double edge = std::numeric_limits<double>::infinity();
    for (const auto& t : targets) edge = std::min(edge, inverse_rescale(t.window.lo, t.sc));
    ReplicaSample out;
    auto too_many = [&](std::size_t count) {
        return std::runtime_error("sample_replica: " + std::to_string(count) + " eigenvalues above the window edge exceed k_top = " +
                                  std::to_string(k_cap) + "; increase k_top");
    };
    if (p.beta == 0.0) {
        auto x = sample_gaussian_iid(p.n, p.alpha, rng);
        Spectrum s;
        s.n = p.n;
        double below = -std::numeric_limits<double>::infinity();
        for (double v : x) {
            if (v >= edge) s.values.push_back(v);
            else below = std::max(below, v);
        }
        if (s.values.size() > k_cap && !allow_full) throw too_many(s.values.size());
        // the largest value under the edge certifies completeness
        if (below > -std::numeric_limits<double>::infinity()) s.values.push_back(below);
        std::sort(s.values.begin(), s.values.end(), std::greater<>());
        out.lambda_max = s.values.front();
        for (std::size_t i = 0; i < targets.size(); ++i)
            out.patterns.push_back(extract_pattern(s, targets[i].sc, targets[i].window, replica_id));
    } else {
        auto t = sample_tridiagonal(p, rng);
        const std::size_t above = p.n - sturm_count(t, edge);
        Spectrum s;
        if (above <= k_cap) s = eigenvalues_above(t, edge, tol, k_cap);
        else if (allow_full) s = full_spectrum(t, tol);
        else throw too_many(above);
        out.lambda_max = s.values.empty() ? top_k_eigenvalues(t, 1, tol).values[0] : s.values.front();
        for (std::size_t i = 0; i < targets.size(); ++i)
            out.patterns.push_back(extract_pattern(s, t, targets[i].sc, targets[i].window, replica_id));
    }
    for (const auto& tg : targets) out.maxima.push_back(tg.sc.a_n * (out.lambda_max - tg.sc.b_n));
    return out;
}

} // namespace betaedge
