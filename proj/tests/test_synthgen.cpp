#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "antilearn/synthgen.hpp"

using namespace antilearn;

namespace {

// Straight transcription of the bracketed composite formula over booleans:
// xor is "!=", xand (true when neither or both operands are true) is "==".
bool formula(const bool b[12]) {
    const bool A = b[0], B = b[1], C = b[2], D = b[3], E = b[4], F = b[5], G = b[6], H = b[7], I = b[8],
               J = b[9], K = b[10], L = b[11];
    const bool left = ((A != B) != (C == D)) != ((E != F) == (G == H));
    const bool right = (I != J) != (K == L);
    return left != right;
}

BitVector12 bits_of(std::uint32_t code) { return BitVector12::from_index(code); }

}  // namespace

TEST(Xand, TruthTable) {
    EXPECT_EQ(xand(0, 0), 1);
    EXPECT_EQ(xand(1, 1), 1);
    EXPECT_EQ(xand(0, 1), 0);
    EXPECT_EQ(xand(1, 0), 0);
}

TEST(CompositeLabel, HandTracedRows) {
    std::array<Bit, 12> zeros{}, ones{}, a_only{};
    ones.fill(1);
    a_only[0] = 1;
    EXPECT_EQ(composite_label(BitVector12(zeros)), 0);
    EXPECT_EQ(composite_label(BitVector12(a_only)), 1);
    EXPECT_EQ(composite_label(BitVector12(ones)), 0);
}

TEST(CompositeLabel, MatchesIndependentFormulaOnAllInputs) {
    for (std::uint32_t code = 0; code < 4096; ++code) {
        bool b[12];
        for (int i = 0; i < 12; ++i) b[i] = (code >> (11 - i)) & 1U;
        ASSERT_EQ(composite_label(bits_of(code)), formula(b) ? 1 : 0) << "code " << code;
    }
}

TEST(CompositeLabel, InvariantUnderPairSwaps) {
    const std::pair<int, int> pairs[] = {{0, 1}, {4, 5}, {8, 9}, {2, 3}, {6, 7}, {10, 11}};
    for (std::uint32_t code = 0; code < 4096; ++code) {
        const auto v = bits_of(code);
        for (auto [i, j] : pairs) {
            auto swapped = v.bits();
            std::swap(swapped[std::size_t(i)], swapped[std::size_t(j)]);
            ASSERT_EQ(composite_label(BitVector12(swapped)), composite_label(v));
        }
    }
}

TEST(BitVector12, RejectsNonBits) {
    std::array<Bit, 12> bad{};
    bad[3] = 2;
    EXPECT_THROW(BitVector12{bad}, InputError);
}

TEST(GenCompositeFull, ShapeOrderAndBalance) {
    const auto ld = gen_composite_full();
    ASSERT_EQ(ld.size(), 4096u);
    ASSERT_EQ(ld.features().cols(), 12u);
    EXPECT_EQ(ld.features().attribute_names().front(), "A");
    EXPECT_EQ(ld.features().attribute_names().back(), "L");
    std::size_t ones = 0;
    for (std::uint32_t r = 0; r < 4096; ++r) {
        for (std::size_t c = 0; c < 12; ++c) ASSERT_EQ(ld.row(r)[c], double((r >> (11 - c)) & 1U));
        ASSERT_EQ(ld.label(r), std::size_t(composite_label(bits_of(r))));
        ones += ld.label(r);
    }
    EXPECT_EQ(ones, 2048u);
    EXPECT_EQ(ld.label(0), 0u);
    for (auto k : ld.features().attribute_kinds()) EXPECT_EQ(k, AttributeKind::binary);
}

TEST(Xor2, Labels) {
    const auto ld = xor2();
    ASSERT_EQ(ld.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto x = ld.row(i);
        EXPECT_EQ(ld.label(i), std::size_t(x[0] + x[1]) % 2);
    }
    EXPECT_EQ(ld.row(0)[0], 0.0);
    EXPECT_EQ(ld.label(0), 0u);
}

TEST(Subsample, SizesPartitionAndDeterminism) {
    const auto three = subsample(xor2(), 0.75, 5);
    EXPECT_EQ(three.train.size(), 3u);
    EXPECT_EQ(three.test.size(), 1u);

    const auto full = gen_composite_full();
    const auto half = subsample(full, 0.5, 9);
    EXPECT_EQ(half.train.size(), 2048u);
    EXPECT_EQ(half.test.size(), 2048u);
    std::set<std::size_t> all(half.train_rows.begin(), half.train_rows.end());
    for (auto r : half.test_rows) EXPECT_TRUE(all.insert(r).second);
    EXPECT_EQ(all.size(), 4096u);
    EXPECT_EQ(subsample(full, 0.5, 9).train_rows, half.train_rows);
    EXPECT_NE(subsample(full, 0.5, 10).train_rows, half.train_rows);
    EXPECT_THROW(subsample(xor2(), 0.05, 1), InputError);
    EXPECT_THROW(subsample(xor2(), 1.0, 1), InputError);
}

TEST(GenLearnable, RuleAndPrior) {
    const auto ld = gen_learnable(10000, 3);
    ASSERT_EQ(ld.features().cols(), 12u);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < ld.size(); ++i) {
        const auto x = ld.row(i);
        ASSERT_EQ(ld.label(i), x[0] + x[1] > 1.0 ? 1u : 0u);
        for (double v : x) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
        ones += ld.label(i);
    }
    EXPECT_NEAR(double(ones) / 10000.0, 0.5, 0.05);
}

TEST(GenRandomLabels, ShapeAndDeterminism) {
    const auto a = gen_random_labels(37, 5, 8), b = gen_random_labels(37, 5, 8);
    EXPECT_EQ(a.size(), 37u);
    EXPECT_EQ(a.features().cols(), 5u);
    EXPECT_EQ(a.labels(), b.labels());
    EXPECT_EQ(a.features().values(), b.features().values());
    EXPECT_NE(gen_random_labels(37, 5, 9).features().values(), a.features().values());
}

TEST(Synth, CsvHasFinalLabelColumn) {
    std::ostringstream out;
    write_csv(out, xor2());
    EXPECT_EQ(out.str(), "X,Y,label\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
}
