#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <stdexcept>

#include "antilearn/error.hpp"
#include "antilearn/parallel.hpp"
#include "antilearn/rng.hpp"

using namespace antilearn;

TEST(SplitMix64, ReferenceSequence) {
    // First outputs of the reference SplitMix64 generator seeded with 0.
    SplitMix64 rng(0);
    EXPECT_EQ(rng(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(rng(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, UniformInUnitInterval) {
    SplitMix64 rng(7);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(SplitMix64, BelowIsInRangeAndCoversIt) {
    SplitMix64 rng(11);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 10000; ++i) {
        const auto v = rng.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
}

TEST(DeriveSeed, DependsOnEveryComponent) {
    const auto base = derive_seed(1, "tag", {1, 2, 3});
    EXPECT_EQ(base, derive_seed(1, "tag", {1, 2, 3}));
    EXPECT_NE(base, derive_seed(2, "tag", {1, 2, 3}));
    EXPECT_NE(base, derive_seed(1, "tah", {1, 2, 3}));
    EXPECT_NE(base, derive_seed(1, "tag", {1, 3, 2}));
    EXPECT_NE(base, derive_seed(1, "tag", {1, 2}));
}

TEST(Shuffle, IsAPermutationAndSeedDeterministic) {
    auto a = iota_indices(50), b = iota_indices(50);
    SplitMix64 r1(3), r2(3);
    shuffle(a, r1);
    shuffle(b, r2);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, iota_indices(50));
    std::sort(a.begin(), a.end());
    EXPECT_EQ(a, iota_indices(50));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    for (std::size_t workers : {1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(500);
        parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
        for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
}

TEST(ParallelFor, RethrowsLowestIndexError) {
    for (std::size_t workers : {1u, 4u}) {
        try {
            parallel_for(100, workers, [](std::size_t i) {
                if (i == 17 || i == 60) throw InputError("cell " + std::to_string(i));
            });
            FAIL();
        } catch (const InputError& e) {
            EXPECT_STREQ(e.what(), "cell 17");
        }
    }
}
