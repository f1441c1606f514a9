#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace bqc {

// FNV-1a, used for stream naming, config hashing and transcript digests.
inline uint64_t fnv1a(std::string_view data, uint64_t seed = 0xcbf29ce484222325ull) {
    uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Named, splittable stream of randomness. Every Monte Carlo entry point takes
// a root seed; sub-streams are derived by name (and optionally an index) so
// that shot-parallel work is order-independent and reproducible.
class RngStream {
public:
    RngStream() : RngStream(0, "root") {}
    RngStream(uint64_t seed, std::string_view name) {
        uint64_t s = seed ^ fnv1a(name);
        uint64_t seq[4];
        for (auto& w : seq) w = splitmix64(s);
        std::seed_seq sseq{seq[0], seq[1], seq[2], seq[3]};
        engine_.seed(sseq);
    }

    RngStream split(std::string_view name) const {
        RngStream child;
        uint64_t s = base_entropy() ^ fnv1a(name);
        uint64_t seq[4];
        for (auto& w : seq) w = splitmix64(s);
        std::seed_seq sseq{seq[0], seq[1], seq[2], seq[3]};
        child.engine_.seed(sseq);
        return child;
    }
    RngStream split(std::string_view name, uint64_t index) const {
        return split(std::string(name) + "#" + std::to_string(index));
    }

    uint64_t u64() { return engine_(); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    // Uniform integer in [0, n)
    uint64_t below(uint64_t n) { return std::uniform_int_distribution<uint64_t>(0, n - 1)(engine_); }
    int bit() { return static_cast<int>(engine_() & 1u); }

    std::mt19937_64& engine() { return engine_; }

private:
    // A stable fingerprint of this stream's seeding, used to derive children.
    uint64_t base_entropy() const {
        std::mt19937_64 copy = engine_;
        return copy();
    }
    std::mt19937_64 engine_;
};

}  // namespace bqc
