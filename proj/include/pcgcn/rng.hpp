#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pcgcn {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for a named sub-stream (epoch shuffles etc.) of a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream));
}

// mt19937_64 with hand-rolled draws. The engine itself is fully specified by
// the standard and the draws below avoid std distributions, whose output may
// differ between standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on {0, ..., bound-1}, exact via rejection sampling.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t rem = (0ULL - bound) % bound;  // 2^64 mod bound
        std::uint64_t x = next();
        if (rem != 0) {
            while (x >= 0ULL - rem) x = next();
        }
        return x % bound;
    }

    // Uniform on [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on [-s, s).
    double symmetric(double s) { return (2.0 * real01() - 1.0) * s; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pcgcn
