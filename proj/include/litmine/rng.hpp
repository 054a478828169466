#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace litmine {

// Deterministic, platform-independent RNG. std::mt19937 with the standard
// distributions is not guaranteed to produce the same stream across standard
// library implementations, and the pipeline promises byte-identical exports
// for a fixed seed, so all stochastic stages draw from this splitmix64-based
// generator instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // Rejection sampling keeps the draw unbiased.
        std::uint64_t limit = ~0ULL - (~0ULL % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Derives a stage-specific seed from the pipeline seed, so that one
// configuration knob controls every stochastic stage while stages stay
// statistically decoupled.
inline std::uint64_t derive_seed(std::uint64_t base, const std::string& stage) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char c : stage) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    Rng mix(base ^ h);
    return mix.next_u64();
}

}  // namespace litmine
