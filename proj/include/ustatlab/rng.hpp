#ifndef USTATLAB_RNG_HPP
#define USTATLAB_RNG_HPP

#include <cstdint>

namespace ustatlab {

// Counter-based generator: every variate is a pure function of
// (seed, stream, counter), so replicates can be evaluated in any order and
// on any number of threads with bit-identical results.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stream key for one experiment replicate.
inline std::uint64_t key(std::uint64_t seed, std::uint64_t n, std::uint64_t replicate) {
    std::uint64_t k = mix64(seed ^ 0xA0761D6478BD642FULL);
    k = mix64(k ^ n * 0xE7037ED1A0B428DBULL);
    k = mix64(k ^ replicate * 0x8EBC6AF09C88C6E3ULL);
    return k;
}

inline std::uint64_t next_u64(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(key ^ stream * 0x589965CC75374CC3ULL) ^ counter * 0x1D8E4E27C47D124FULL);
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(next_u64(key, stream, counter) >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t kStreamLatent = 0;
constexpr std::uint64_t kStreamEdge = 1;
constexpr std::uint64_t kStreamAux = 2;

}  // namespace rng

}  // namespace ustatlab

#endif
