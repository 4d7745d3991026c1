#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace vrdlab {

// Counter-based random stream: every output is a pure function of
// (seed, counter), so draws are reproducible regardless of call order,
// call history, or how work is split across threads. Substreams are
// derived by hashing the parent seed with arbitrary key material.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    // splitmix64 finalizer; good avalanche, cheap, well known.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    static std::uint64_t combine(std::uint64_t acc, std::uint64_t key) {
        return mix(acc ^ (key + 0x9e3779b97f4a7c15ull + (acc << 6) + (acc >> 2)));
    }

    // Deterministic substream derivation, e.g. derive(master, {row, pattern}).
    static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t acc = mix(master);
        for (std::uint64_t k : keys) acc = combine(acc, k);
        return RngStream(acc);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(seed_ ^ mix(counter + 0x632be59bd9b4e019ull));
    }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). Fixed-point multiply; the O(bound/2^64)
    // bias is irrelevant at simulation scale and keeps the draw counter-pure.
    std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits(counter)) * bound) >> 64);
    }

    // Standard normal via Box-Muller. Consumes counters 2c and 2c+1 so a
    // draw indexed by c never collides with its neighbors.
    double gaussian(std::uint64_t counter) const {
        double u1 = static_cast<double>((bits(2 * counter) >> 11) + 1) * 0x1.0p-53; // (0, 1]
        double u2 = uniform01(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t seed_;
};

} // namespace vrdlab
