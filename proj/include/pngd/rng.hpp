#pragma once

#include <cstdint>

namespace pngd {

// xoshiro256** seeded through splitmix64. Replica r of master seed s gets the
// stream Rng::for_replica(s, r), independent of how replicas are scheduled.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    static Rng for_replica(std::uint64_t master_seed, std::uint64_t replica);

    std::uint64_t next();
    double uniform();                 // [0, 1), 53 bits
    double uniform_open();            // (0, 1)
    std::int64_t poisson(double mean);

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace pngd
