#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "core/errors.hpp"

namespace monodens {

// Self-contained PRNG stack so that every draw is bit-reproducible across
// platforms and standard-library versions (std:: distributions are
// implementation-defined). Engine is xoshiro256++, seeded through SplitMix64.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Keyed stream derivation: derive_seed(base, k) gives the seed of child
// stream k. Experiments split the master seed hierarchically
// (scenario -> n index -> replication); the scheme is stable by contract
// because report reproducibility depends on it.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    std::uint64_t s = base ^ (0xA0761D6478BD642FULL * (key + 1));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; never returns 0 so it is safe inside log().
    double uniform01_open0() { return 1.0 - uniform01(); }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double exponential(double rate) { return -std::log(uniform01_open0()) / rate; }

    double normal() {
        // Box-Muller; one value per call keeps the stream layout simple.
        const double u1 = uniform01_open0();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang squeeze; shape < 1 handled by the boost trick.
    double gamma(double shape, double rate = 1.0) {
        require(shape > 0.0 && rate > 0.0, errc::invalid_argument, "gamma: shape and rate must be positive");
        if (shape < 1.0) {
            const double u = uniform01_open0();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01_open0();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    std::vector<double> dirichlet(std::size_t k, double concentration) {
        std::vector<double> w(k);
        double total = 0.0;
        for (auto& wi : w) {
            wi = gamma(concentration);
            total += wi;
        }
        for (auto& wi : w) wi /= total;
        return w;
    }

    // Index draw proportional to non-negative weights (need not be normalized).
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        require(total > 0.0, errc::runtime_error, "categorical: all weights are zero");
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.size() - 1;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

} // namespace monodens
