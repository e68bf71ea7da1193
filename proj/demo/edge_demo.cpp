// Samples a few high-temperature matrices and prints their rescaled top points.
#include "betaedge/pipeline.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace betaedge;
    const std::size_t n = 20000;
    const double beta = 1.0 / (n * std::log(n) * std::log(n));
    const auto sc = compute_scaling(n, DeltaSchedule::constant(1.0));
    std::printf("n=%zu beta=%.3g a_n=%.6f b_n=%.6f\n", n, beta, sc.a_n, sc.b_n);
    for (std::uint64_t r = 0; r < 5; ++r) {
        RngStream rng(7, r);
        auto s = sample_replica({n, beta, 1.0}, {{sc, {-3.0, 5.0}}}, 100, false, rng, static_cast<std::int64_t>(r));
        std::printf("replica %llu: %zu points, max %.4f:", static_cast<unsigned long long>(r), s.patterns[0].points.size(), s.maxima[0]);
        for (double x : s.patterns[0].points) std::printf(" %.3f", x);
        std::printf("\n");
    }
}
