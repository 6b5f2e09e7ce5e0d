#pragma once

#include <cstdint>
#include <initializer_list>

// Splittable random streams. Every draw site in the simulator gets its own
// stream, keyed by (seed, purpose, hypothesis, trial, sensor, ...). Two
// consequences we rely on:
//   - results are independent of how trials are sharded across workers, and
//   - runs that share a seed but differ in sensor count produce identical
//     draws for the sensors they have in common, which is what makes the
//     paired network-size comparison meaningful.
//
// The engine is SplitMix64 (Steele, Lea, Flood 2014): one 64-bit word of
// state, a constant-time jump between streams, and good enough statistical
// quality for Monte Carlo noise. It satisfies UniformRandomBitGenerator, so
// the <random> distributions run on top unchanged.

namespace lmpt::rng {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z)
{
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

struct SplitMix64 {
    using result_type = std::uint64_t;
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t{0}; }

    result_type operator()()
    {
        state += kGamma;
        return mix64(state);
    }
};

// Derives a stream key by folding each tag through the full mixer. Order
// matters ((a,b) and (b,a) give different streams); every stage applies the
// avalanche so nearby seeds or tags do not produce correlated streams.
inline std::uint64_t derive(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t s = mix64(seed + kGamma);
    for (std::uint64_t t : tags)
        s = mix64(s ^ (t * kGamma + 0x1D8E4E27C47D124Full));
    return s;
}

inline SplitMix64 make_stream(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> tags)
{
    return SplitMix64(derive(seed, tags));
}

// Purpose tags for the top-level split. Keep these stable: changing them
// changes every simulated number downstream of a given seed.
enum StreamTag : std::uint64_t {
    kTagGains = 1,
    kTagSupport = 2,
    kTagSensor = 3,
    kTagPso = 4,
};

} // namespace lmpt::rng
