#pragma once

#include <cstdint>

namespace aerotrack {

/// splitmix64 finalizer; used for seeding and substream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ with explicitly implemented distribution transforms, so
/// generated streams are identical on every platform (std:: distributions are
/// not portable across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit mantissa.
    double uniform01();

    double uniform(double lo, double hi);

    /// Standard normal via the Marsaglia polar method (no trig, rejection
    /// count deterministic given the stream).
    double normal();

    double normal(double mean, double sigma);

    /// Knuth's product method; fine for the small rates used here.
    std::uint64_t poisson(double lambda);

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Derives an independent seed for a keyed substream. Per-object streams are
/// split this way so adding objects never perturbs existing trajectories.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t key);

}  // namespace aerotrack
