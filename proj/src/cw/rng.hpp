#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cw {

// splitmix64 step; the documented 64-bit mixer used everywhere a derived seed
// is needed (replicate seeds, per-row tie-break seeds).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derived seed for sub-stream `index` of `seed`: splitmix64 applied to the
// xor of the mixed parts, so neighbouring indices give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Seeded uniform stream with inverse-CDF variate generation. mt19937_64 is
// fully specified by the standard and our quantile functions are
// self-contained, so identical seeds give identical draws on any platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0,1); safe as a quantile argument.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(double mu, double sigma);

    // Beta(b, b) draw via the inverse CDF.
    double beta_symmetric(double b);

    // Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

    // Fisher-Yates shuffle driven by uniform_index.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace cw
