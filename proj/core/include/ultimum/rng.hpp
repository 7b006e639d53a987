#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ultimum {

/// SplitMix64 step: advances `state` and returns the mixed output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream `index` under `master`. Pure function of both arguments,
/// so path p draws the same numbers whichever thread simulates it.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t state = master;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    splitmix64(state);
    return splitmix64(state);
}

/// xoshiro256++ (Blackman & Vigna), a UniformRandomBitGenerator with 256 bits
/// of state seeded through SplitMix64.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256pp(std::uint64_t seed) noexcept {
        for (auto& word : state_) word = splitmix64(seed);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
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

    friend constexpr bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

using Engine = Xoshiro256pp;

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
    return Engine(substream_seed(master, index));
}

}  // namespace ultimum
