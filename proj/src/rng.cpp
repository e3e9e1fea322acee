#include "pngd/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pngd {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& w : s_) w = splitmix64(st);
}

Rng Rng::for_replica(std::uint64_t master_seed, std::uint64_t replica) {
    std::uint64_t st = master_seed;
    const std::uint64_t a = splitmix64(st);
    std::uint64_t st2 = replica ^ 0xD1B54A32D192ED03ULL;
    const std::uint64_t b = splitmix64(st2);
    return Rng(a ^ (b * 0x9E3779B97F4A7C15ULL) ^ replica);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
}

std::int64_t Rng::poisson(double mean) {
    if (!(mean >= 0) || !std::isfinite(mean)) throw std::invalid_argument("poisson: mean must be finite and >= 0");
    if (mean == 0) return 0;
    if (mean <= 30) {
        // sequential inversion
        const double u = uniform();
        double p = std::exp(-mean);
        double c = p;
        std::int64_t k = 0;
        while (u >= c) {
            ++k;
            p *= mean / k;
            c += p;
            if (p < 1e-300 && k > mean) break;
        }
        return k;
    }
    // PTRD transformed rejection (Hoermann 1993)
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::fabs(u);
        const auto k = static_cast<std::int64_t>(std::floor((2 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= vr) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(static_cast<double>(k) + 1))
            return k;
    }
}

}  // namespace pngd
