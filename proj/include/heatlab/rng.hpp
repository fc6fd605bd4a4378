#pragma once

#include <cstdint>
#include <random>

namespace heatlab {

// splitmix64, used to derive independent substreams from a master seed.
// Work unit i gets mt19937_64 seeded with splitmix64(master ^ i * phi),
// which makes results independent of thread scheduling: a unit's stream
// depends only on (master, i).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t unit) {
    return std::mt19937_64(splitmix64(master ^ (unit * 0x9e3779b97f4a7c15ULL)));
}

}  // namespace heatlab
