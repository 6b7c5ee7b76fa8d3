#pragma once

#include <cstdint>

// Counter-based random draws. Every value is a pure function of
// (seed, stream, index), so results never depend on call order or threading.
namespace coda::rng {

enum class Stream : std::uint64_t {
  graph_edges = 1,
  graph_repair = 2,
  initial_opinions = 3,
};

constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t draw(std::uint64_t seed, Stream stream,
                             std::uint64_t index,
                             std::uint64_t attempt = 0) noexcept {
  const std::uint64_t key = mix(seed ^ mix(static_cast<std::uint64_t>(stream)));
  return mix(key ^ mix(index ^ mix(attempt + 0x5851f42d4c957f2dULL)));
}

// Uniform on [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

__extension__ using uint128 = unsigned __int128;

// Uniform integer in [0, bound) via multiply-shift.
constexpr std::uint64_t to_below(std::uint64_t bits, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(bits) * bound) >> 64);
}

}  // namespace coda::rng
