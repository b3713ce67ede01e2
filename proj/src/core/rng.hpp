#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace cavkit {

// 64-bit FNV-1a. Used for feature hashing, id-derived RNG streams and
// content-addressed run directories; the constants are part of the file
// format contracts, do not change them.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// SplitMix64. All randomness in the library flows through this generator so
// that runs are bit-reproducible across platforms; std:: distributions are
// implementation-defined and deliberately avoided.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derives an independent stream for (seed, name), e.g. per-utterance
    // DoE streams keyed by utterance id.
    static Rng for_stream(std::uint64_t seed, std::string_view name) {
        return Rng(seed ^ (fnv1a64(name) | 1ull));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [-scale, scale).
    double next_symmetric(double scale) { return (2.0 * next_double() - 1.0) * scale; }

    // Unbiased uniform integer in [0, bound); rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    // First n entries of a Fisher-Yates shuffle of 0..pop-1; n == pop gives a
    // full permutation.
    std::vector<std::size_t> sample_indices(std::size_t pop, std::size_t n);

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace cavkit
