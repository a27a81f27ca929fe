#pragma once

// Seeding scheme used everywhere in the library.
//
// The generator is SplitMix64: a 64-bit state advanced by the golden-ratio
// increment and passed through the standard avalanche finalizer. Streams for
// independent purposes are never split off a shared generator at run time;
// instead every consumer derives its own seed up front with derive_seed():
//
//   h = mix(master)
//   for each byte c of tag:      h = mix(h ^ c)
//   for each index i:            h = mix(h ^ (i + 0x9e3779b97f4a7c15))
//
// so a cell's stream depends only on (master seed, purpose tag, grid indices)
// and never on execution order or thread scheduling.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace antilearn {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::initializer_list<std::uint64_t> indices = {}) noexcept {
    std::uint64_t h = mix64(master);
    for (unsigned char c : tag) h = mix64(h ^ c);
    for (std::uint64_t i : indices) h = mix64(h ^ (i + 0x9e3779b97f4a7c15ULL));
    return h;
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t below(std::uint64_t n) noexcept {
        if (n <= 1) return 0;
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % n;
    }

    bool coin() noexcept { return ((*this)() >> 63) != 0; }

private:
    std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64; unlike std::shuffle the result
/// is identical across standard library implementations.
template <class T>
void shuffle(std::span<T> items, SplitMix64& rng) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(items[i - 1], items[j]);
    }
}

template <class T>
void shuffle(std::vector<T>& items, SplitMix64& rng) noexcept {
    shuffle(std::span<T>(items), rng);
}

inline std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

}  // namespace antilearn
