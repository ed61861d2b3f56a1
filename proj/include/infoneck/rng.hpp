#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace infoneck {

// Deterministic PRNG with a fixed, platform-independent bit stream.
// std::shuffle / std::normal_distribution are implementation-defined, so
// everything that must reproduce bit-exactly across toolchains goes
// through this engine instead.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // warm up so nearby seeds decorrelate
        next_u64();
        next_u64();
    }

    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, n), n > 0; rejection keeps it unbiased
    uint64_t next_below(uint64_t n) {
        const uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // standard normal via Box-Muller (caches the spare draw)
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 1e-300) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stable sub-seed derivation: hash the tag into the parent seed so that
// independent consumers (shuffling, noise, init, ...) never share streams.
inline uint64_t derive_seed(uint64_t seed, std::string_view tag) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    h ^= seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    // final splitmix-style avalanche
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

inline uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t index) {
    return derive_seed(derive_seed(seed, tag) ^ (index * 0xd1342543de82ef95ULL + 1), "idx");
}

}  // namespace infoneck
