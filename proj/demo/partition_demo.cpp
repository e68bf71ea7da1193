// Closed-form log partition function against direct quadrature.
#include "betaedge/partition.hpp"

#include <cstdio>

int main() {
    using namespace betaedge;
    for (std::size_t n = 1; n <= 4; ++n)
        for (double beta : {0.5, 1.0, 2.0}) {
            PartitionQuery q{n, 1.0, beta};
            auto o = log_partition_oracle(q);
            std::printf("n=%zu beta=%.1f closed=%.12f quadrature=%.12f (+-%.1e)\n", n, beta, log_partition(q), o.log_value, o.error);
        }
    auto c = contiguity_log_ratio(2000, 0.0, std::pow(2000.0, -1.5));
    std::printf("n=2000 contiguity: exact %.6f, gamma/8 prediction %.6f, first order %.6f\n", c.exact, c.predicted, c.first_order);
}
