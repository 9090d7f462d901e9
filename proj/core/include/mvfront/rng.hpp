#pragma once

#include <cstdint>

namespace mvf {

// Addressable random stream: identical (master_seed, stream_index) pairs
// reproduce identical draw sequences bitwise, so replications can be farmed
// out to any number of workers without changing results.
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

// xoshiro256++ generator seeded from an RngStream via splitmix64.
// Draw sequences are deterministic in the stream alone; there is no global
// state.  Not cryptographic.
class Rng {
public:
    explicit Rng(RngStream stream);

    std::uint64_t next_u64();

    // uniform on [0,1) with 53-bit resolution
    double uniform01();

    // standard normal (Box-Muller; pairs are cached)
    double gauss();

    // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang squeeze)
    double gamma(double shape);

    // chi-square with nu > 0 degrees of freedom
    double chisq(double nu);

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mvf
