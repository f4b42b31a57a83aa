#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "fixpoint/errors.hpp"

namespace fixpoint {

/// One splitmix64 step. Used to derive independent substreams from a seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mixes a seed with a list of parameter words so that every
/// (seed, parameters) combination drives its own deterministic stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    for (std::uint64_t p : parts) {
        s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        h ^= splitmix64(s);
    }
    return h;
}

inline std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

/// Deterministic random source. The engine is the standard mt19937_64,
/// whose output sequence is pinned by the C++ standard; the conversions to
/// doubles are spelled out here instead of using the standard distributions,
/// which are not portable across library implementations.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_open01() { return 1.0 - uniform01(); }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Log-uniform in (lo, hi]; spreads samples evenly across scales.
    /// Requires 0 < lo < hi.
    double log_uniform(double lo, double hi) {
        if (!(lo > 0.0) || !(hi > lo)) throw SamplerError("log_uniform: requires 0 < lo < hi");
        double r = lo * std::pow(hi / lo, uniform_open01());
        // pow can land exactly on lo or sail just past hi; pin the result
        // back into the half-open band so callers can test membership exactly.
        if (!(r > lo)) r = std::nextafter(lo, hi);
        if (r > hi) r = hi;
        return r;
    }

    /// Uniform integer in [lo, hi], inclusive on both ends.
    int uniform_int(int lo, int hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        auto wide = static_cast<unsigned __int128>(gen_()) * span;
        return lo + static_cast<int>(wide >> 64);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace fixpoint
