#pragma once

#include <cstdint>
#include <random>

namespace ccl {

// splitmix64 finalizer: avalanching 64-bit mix used to derive substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent deterministic substream for (seed, a, b, c).  Streams derived
// from distinct id tuples are decorrelated by the mixing; the same tuple
// always yields the same engine state, independent of call order.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  s = mix64(s ^ mix64(a ^ 0xbb67ae8584caa73bULL));
  s = mix64(s ^ mix64(b ^ 0x3c6ef372fe94f82bULL));
  s = mix64(s ^ mix64(c ^ 0xa54ff53a5f1d36f1ULL));
  return std::mt19937_64(s);
}

}  // namespace ccl
