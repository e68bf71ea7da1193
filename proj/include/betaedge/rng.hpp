#pragma once

#include <cstdint>
#include <random>

namespace betaedge {

// One independent random stream per (seed, stream_id). The engine is seeded
// through seed_seq from both keys so neighbouring stream ids do not overlap.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                          0x62657461u};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    engine_type& engine() { return engine_; }

    // uniform on [0, 1)
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double gaussian() { return normal_(engine_); }

    // Gamma(shape, scale 1). libstdc++ handles shape < 1 via
    // Gamma(a) = Gamma(a + 1) * U^(1/a); an underflowed U^(1/a) stays 0.
    double gamma(double shape) {
        return gamma_(engine_, std::gamma_distribution<double>::param_type(shape, 1.0));
    }

    std::uint64_t poisson(double mean) {
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::gamma_distribution<double> gamma_{1.0, 1.0};
};

// Base key for a family of replica streams: replica i uses stream_base + i.
struct SeedSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_base = 0;

    RngStream stream(std::uint64_t i) const { return RngStream(seed, stream_base + i); }
};

} // namespace betaedge
