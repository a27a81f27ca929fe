#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/rng.hpp"

namespace antilearn {

using Bit = std::uint8_t;

inline constexpr Bit bit_xor(Bit a, Bit b) noexcept { return static_cast<Bit>((a ^ b) & 1U); }

/// Exclusive-AND: true when neither or both operands are true (XNOR).
inline constexpr Bit xand(Bit a, Bit b) noexcept { return static_cast<Bit>(1U - bit_xor(a, b)); }

/// Twelve operand bits, positionally A..L.
class BitVector12 {
public:
    static constexpr std::size_t size = 12;

    constexpr BitVector12() = default;

    explicit BitVector12(const std::array<Bit, size>& bits) : bits_(bits) {
        for (Bit b : bits_)
            if (b > 1) throw InputError("BitVector12: every element must be 0 or 1");
    }

    /// Bits of `code` with A as the most significant of the low 12 bits.
    static constexpr BitVector12 from_index(std::uint32_t code) noexcept {
        BitVector12 v;
        for (std::size_t i = 0; i < size; ++i)
            v.bits_[i] = static_cast<Bit>((code >> (size - 1 - i)) & 1U);
        return v;
    }

    constexpr Bit operator[](std::size_t i) const noexcept { return bits_[i]; }
    constexpr const std::array<Bit, size>& bits() const noexcept { return bits_; }

private:
    std::array<Bit, size> bits_{};
};

/// {[(A xor B) xor (C xand D)] xor [(E xor F) xand (G xand H)]}
///     xor {[(I xor J) xor (K xand L)]}
/// evaluated with exactly this bracketing.
inline constexpr Bit composite_label(const BitVector12& v) noexcept {
    const Bit A = v[0], B = v[1], C = v[2], D = v[3], E = v[4], F = v[5];
    const Bit G = v[6], H = v[7], I = v[8], J = v[9], K = v[10], L = v[11];
    const Bit left = bit_xor(bit_xor(bit_xor(A, B), xand(C, D)),
                             xand(bit_xor(E, F), xand(G, H)));
    const Bit right = bit_xor(bit_xor(I, J), xand(K, L));
    return bit_xor(left, right);
}

namespace detail {

inline LabeledDataset binary_table(std::vector<std::string> names, std::size_t n,
                                   std::vector<double> values, std::vector<std::size_t> labels,
                                   std::vector<std::string> class_names = {"0", "1"}) {
    const std::size_t nc = names.size();
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
    Dataset d(std::move(names), std::vector<AttributeKind>(nc, AttributeKind::binary),
              std::move(values), std::vector<std::uint8_t>(n * nc, 0), std::move(ids));
    return LabeledDataset(std::move(d), std::move(labels), std::move(class_names));
}

inline LabeledDataset continuous_table(std::size_t n, std::size_t d, std::vector<double> values,
                                       std::vector<std::size_t> labels) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
    Dataset ds(std::move(names), std::vector<AttributeKind>(d, AttributeKind::continuous),
               std::move(values), std::vector<std::uint8_t>(n * d, 0), std::move(ids));
    return LabeledDataset(std::move(ds), std::move(labels), {"0", "1"});
}

}  // namespace detail

/// All 4096 assignments of A..L in lexicographic order (A most significant),
/// labelled by composite_label.
inline LabeledDataset gen_composite_full() {
    constexpr std::size_t n = 4096;
    std::vector<double> values;
    values.reserve(n * BitVector12::size);
    std::vector<std::size_t> labels;
    labels.reserve(n);
    for (std::uint32_t code = 0; code < n; ++code) {
        const auto v = BitVector12::from_index(code);
        for (Bit b : v.bits()) values.push_back(b);
        labels.push_back(composite_label(v));
    }
    return detail::binary_table({"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"}, n,
                                std::move(values), std::move(labels));
}

/// The four-point XOR table over (X, Y).
inline LabeledDataset xor2() {
    std::vector<double> values;
    std::vector<std::size_t> labels;
    for (Bit x = 0; x < 2; ++x)
        for (Bit y = 0; y < 2; ++y) {
            values.push_back(x);
            values.push_back(y);
            labels.push_back(bit_xor(x, y));
        }
    return detail::binary_table({"X", "Y"}, 4, std::move(values), std::move(labels));
}

struct SubsampleSplit {
    LabeledDataset train;
    LabeledDataset test;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

/// Train on round(fraction * n) rows drawn without replacement; test on the rest.
inline SubsampleSplit subsample(const LabeledDataset& ld, double fraction, std::uint64_t seed) {
    const std::size_t n = ld.size();
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InputError("subsample: fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::lround(fraction * double(n)));
    if (n_train == 0 || n_train >= n)
        throw InputError("subsample: fraction " + format_number(fraction) + " of " +
                         std::to_string(n) + " rows leaves an empty train or test set");
    SplitMix64 rng(seed);
    auto order = iota_indices(n);
    shuffle(order, rng);
    SubsampleSplit s;
    s.train_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(s.train_rows.begin(), s.train_rows.end());
    std::sort(s.test_rows.begin(), s.test_rows.end());
    s.train = ld.subset(s.train_rows);
    s.test = ld.subset(s.test_rows);
    return s;
}

/// Twelve uniform [0, 1) attributes; label 1 iff x1 + x2 > 1.
inline LabeledDataset gen_learnable(std::size_t n, std::uint64_t seed) {
    if (n < 4) throw InputError("gen_learnable: n must be at least 4");
    constexpr std::size_t d = 12;
    SplitMix64 rng(seed);
    std::vector<double> values(n * d);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) values[i * d + j] = rng.uniform();
        labels[i] = values[i * d] + values[i * d + 1] > 1.0 ? 1 : 0;
    }
    return detail::continuous_table(n, d, std::move(values), std::move(labels));
}

/// n x d uniform [0, 1) attributes with fair-coin labels independent of them.
inline LabeledDataset gen_random_labels(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 2 || d < 1) throw InputError("gen_random_labels: need n >= 2 and d >= 1");
    SplitMix64 rng(seed);
    std::vector<double> values(n * d);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) values[i * d + j] = rng.uniform();
        labels[i] = rng.coin() ? 1 : 0;
    }
    return detail::continuous_table(n, d, std::move(values), std::move(labels));
}

struct SynthSpec {
    enum class Kind { xor2, composite12, learnable, random };
    Kind kind = Kind::composite12;
    std::size_t n_samples = 500;
    std::size_t n_attributes = 12;
    std::uint64_t seed = 0;
};

inline SynthSpec::Kind parse_synth_kind(const std::string& s) {
    if (s == "xor2") return SynthSpec::Kind::xor2;
    if (s == "composite12") return SynthSpec::Kind::composite12;
    if (s == "learnable") return SynthSpec::Kind::learnable;
    if (s == "random") return SynthSpec::Kind::random;
    throw InputError("unknown synthetic dataset kind '" + s + "'");
}

inline LabeledDataset generate(const SynthSpec& spec) {
    switch (spec.kind) {
        case SynthSpec::Kind::xor2: return xor2();
        case SynthSpec::Kind::composite12: return gen_composite_full();
        case SynthSpec::Kind::learnable: return gen_learnable(spec.n_samples, spec.seed);
        case SynthSpec::Kind::random:
            return gen_random_labels(spec.n_samples, spec.n_attributes, spec.seed);
    }
    return gen_composite_full();
}

}  // namespace antilearn
