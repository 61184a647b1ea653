#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace msa {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One top-level seed; every consumer asks for its own named stream so adding
// a consumer never shifts the draws of another.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {}

    uint64_t seed() const { return seed_; }

    std::mt19937_64 stream(std::string_view name) const {
        uint64_t h = 1469598103934665603ULL;  // FNV-1a
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        return std::mt19937_64(splitmix64(seed_ ^ splitmix64(h)));
    }

private:
    uint64_t seed_;
};

}  // namespace msa
