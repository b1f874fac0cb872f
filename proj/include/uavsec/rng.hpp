#pragma once

#include <cstdint>
#include <limits>
#include <cmath>

// Counter-derived random substreams: every Monte Carlo trial owns an
// independent generator seeded from (seed, stream_id), so results do not
// depend on how trials are scheduled across threads.

namespace uavsec::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    Xoshiro256pp() : Xoshiro256pp(0, 0) {}

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t sm = seed ^ (0xd1342543de82ef95ULL * (stream_id + 1));
        for (auto& word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() { return next(); }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform draw in (0, 1]; never returns 0 so -log(u) is finite.
    double uniform01() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unit-mean exponential draw.
    double exponential() { return -std::log(uniform01()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace uavsec::rng
