#pragma once

#include <cstdint>

namespace afdm {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// mix64(a, b, c) = splitmix64(splitmix64(splitmix64(a) ^ b) ^ c)
std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Independent per-frame streams, derived as mix64(frame_seed, stream, 0).
enum class Stream : std::uint64_t { Bits = 1, Channel = 2, Noise = 3 };

inline std::uint64_t stream_seed(std::uint64_t frame_seed, Stream s) {
  return mix64(frame_seed, static_cast<std::uint64_t>(s), 0);
}

}  // namespace afdm
