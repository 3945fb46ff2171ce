#pragma once

#include <cstdint>

namespace uwoc {

// splitmix64 step (Vigna). Used only for seed derivation, never as the
// simulation generator itself.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for a numbered stream of a master seed. Streams are
// fixed by convention (see below), so replays are stable regardless of how
// many workers the run is split across.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t state = master;
    splitmix64_next(state);
    state ^= 0xD1B54A32D192ED03ull * (stream + 1);
    return splitmix64_next(state);
}

// Stream conventions. Monte-Carlo chunk i draws its frame from
// derive_seed(master, kChunkStreamBase + i); within a frame seed, source
// bits and channel noise use the two streams below.
inline constexpr std::uint64_t kBitStream = 0;
inline constexpr std::uint64_t kNoiseStream = 1;
inline constexpr std::uint64_t kChunkStreamBase = 0x100;

} // namespace uwoc
