#ifndef BOUNDPOP_RANDOM_HPP
#define BOUNDPOP_RANDOM_HPP

#include <cstdint>
#include <random>

namespace boundpop {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator for substream `stream` of `seed`. Replicate i of a
// run always sees the same stream no matter which thread executes it.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix64(seed)),
                    static_cast<std::uint32_t>(mix64(seed) >> 32),
                    static_cast<std::uint32_t>(mix64(stream ^ 0x5851f42d4c957f2dULL)),
                    static_cast<std::uint32_t>(mix64(stream ^ 0x5851f42d4c957f2dULL) >> 32)};
  return Rng(seq);
}

// Seed for the i-th independent job (replicate, simulation) of a run.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
  return mix64(seed ^ mix64(i + 0x2545f4914f6cdd1dULL));
}

std::uint64_t entropy_seed();

} // namespace boundpop

#endif
