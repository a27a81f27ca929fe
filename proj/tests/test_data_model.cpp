#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "antilearn/cv.hpp"
#include "antilearn/dataset.hpp"
#include "antilearn/labels.hpp"
#include "antilearn/rng.hpp"

using namespace antilearn;

namespace {

Dataset csv(const std::string& text, const Schema& schema = {}) {
    std::istringstream in(text);
    return parse_csv(in, schema);
}

Dataset column_table(std::vector<std::vector<double>> cols, std::vector<std::vector<bool>> miss = {}) {
    const std::size_t nc = cols.size(), n = cols.front().size();
    std::vector<std::string> names;
    std::vector<AttributeKind> kinds(nc, AttributeKind::continuous);
    std::vector<double> v(n * nc);
    std::vector<std::uint8_t> m(n * nc, 0);
    std::vector<std::string> ids;
    for (std::size_t c = 0; c < nc; ++c) names.push_back("c" + std::to_string(c));
    for (std::size_t r = 0; r < n; ++r) {
        ids.push_back(std::to_string(r));
        for (std::size_t c = 0; c < nc; ++c) {
            v[r * nc + c] = cols[c][r];
            if (!miss.empty() && miss[c][r]) m[r * nc + c] = 1;
        }
    }
    return Dataset(names, kinds, v, m, ids);
}

LabeledDataset with_labels(std::vector<std::size_t> labels, std::size_t classes) {
    std::vector<double> x(labels.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i);
    std::vector<std::string> names;
    for (std::size_t c = 0; c < classes; ++c) names.push_back(std::to_string(c));
    return LabeledDataset(column_table({x}), std::move(labels), names);
}

}  // namespace

// --- load_csv ---------------------------------------------------------------

TEST(LoadCsv, EmptyCellIsMasked) {
    const Dataset d = csv("a,b\n1,2\n3,\n5,6\n");
    ASSERT_EQ(d.rows(), 3u);
    EXPECT_TRUE(d.is_missing(1, 1));
    EXPECT_FALSE(d.is_missing(1, 0));
    EXPECT_FALSE(d.is_missing(2, 1));
}

TEST(LoadCsv, QuestionMarkIsMasked) {
    const Dataset d = csv("a\n1.5\n?\n");
    EXPECT_TRUE(d.is_missing(1, 0));
    EXPECT_EQ(d.kind(0), AttributeKind::continuous);
}

TEST(LoadCsv, ZeroOneColumnIsBinary) {
    const Dataset d = csv("flag,x\n0,0.5\n1,2\n?,3\n1,4\n");
    EXPECT_EQ(d.kind(0), AttributeKind::binary);
    EXPECT_EQ(d.kind(1), AttributeKind::continuous);
}

TEST(LoadCsv, TextColumnIsCategoricalInInputOrder) {
    const Dataset d = csv("site,x\ncolon,1\nrectum,2\ncolon,3\n");
    ASSERT_EQ(d.kind(0), AttributeKind::categorical);
    EXPECT_EQ(d.levels(0), (std::vector<std::string>{"colon", "rectum"}));
    EXPECT_EQ(d.value(0, 0), 0.0);
    EXPECT_EQ(d.value(1, 0), 1.0);
    EXPECT_EQ(d.value(2, 0), 0.0);
}

TEST(LoadCsv, RaggedRowIsRejectedWithItsLine) {
    try {
        csv("a,b\n1,2,3\n");
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(LoadCsv, UnparseableCellInContinuousColumnNamesRowAndColumn) {
    Schema s{{"x", ColumnRole::continuous}};
    try {
        csv("x\n1\nabc\n", s);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
    }
}

TEST(LoadCsv, SchemaOverridesInference) {
    std::istringstream schema_text("stage=categorical\nid=id\n");
    const Schema s = parse_schema(schema_text);
    const Dataset d = csv("id,stage,x\np1,2,0\np2,3,1\n", s);
    ASSERT_EQ(d.cols(), 2u);
    EXPECT_EQ(d.sample_ids(), (std::vector<std::string>{"p1", "p2"}));
    EXPECT_EQ(d.kind(0), AttributeKind::categorical);
    EXPECT_EQ(d.kind(1), AttributeKind::binary);
}

TEST(LoadCsv, WriteThenReadRoundTrips) {
    const Dataset d = csv("a,b,c\n0.1,1,x\n?,0,y\n3e-7,1,x\n");
    std::ostringstream out;
    write_csv(out, d);
    const Dataset e = csv(out.str());
    ASSERT_EQ(e.rows(), d.rows());
    for (std::size_t r = 0; r < d.rows(); ++r)
        for (std::size_t c = 0; c < d.cols(); ++c) {
            EXPECT_EQ(e.is_missing(r, c), d.is_missing(r, c));
            if (!d.is_missing(r, c)) { EXPECT_EQ(e.value(r, c), d.value(r, c)); }
        }
}

// --- missing_stats ----------------------------------------------------------

TEST(MissingStats, OneOfFourCells) {
    const auto rep = missing_stats(column_table({{1, 2}, {3, 4}}, {{false, true}, {false, false}}));
    EXPECT_EQ(rep.overall_fraction, 0.25);
    EXPECT_EQ(rep.per_attribute_fraction, (std::vector<double>{0.5, 0.0}));
    EXPECT_EQ(rep.per_sample_fraction, (std::vector<double>{0.0, 0.5}));
}

TEST(MissingStats, NoneMasked) {
    const auto rep = missing_stats(column_table({{1, 2}, {3, 4}}));
    EXPECT_EQ(rep.overall_fraction, 0.0);
    for (double f : rep.per_attribute_fraction) EXPECT_EQ(f, 0.0);
    for (double f : rep.per_sample_fraction) EXPECT_EQ(f, 0.0);
}

TEST(MissingStats, AllMasked) {
    const auto rep = missing_stats(column_table({{1, 2}, {3, 4}}, {{true, true}, {true, true}}));
    EXPECT_EQ(rep.overall_fraction, 1.0);
}

// --- impute -----------------------------------------------------------------

TEST(Impute, MeanFillsContinuous) {
    const Dataset d = column_table({{1, 0, 3}}, {{false, true, false}});
    const Dataset e = impute(d, ImputePolicy::mean);
    EXPECT_EQ(e.value(1, 0), 2.0);
    EXPECT_FALSE(e.has_missing());
    EXPECT_TRUE(d.is_missing(1, 0));  // input untouched
}

TEST(Impute, MedianPolicy) {
    const Dataset d = column_table({{1, 0, 3, 10}}, {{false, true, false, false}});
    EXPECT_EQ(impute(d, ImputePolicy::median).value(1, 0), 3.0);
}

TEST(Impute, BinaryTakesMode) {
    const Dataset d = csv("f\n1\n1\n0\n?\n");
    EXPECT_EQ(impute(d).value(3, 0), 1.0);
}

TEST(Impute, BinaryModeTieGoesLow) {
    const Dataset d = csv("f\n0\n1\n?\n");
    EXPECT_EQ(impute(d).value(2, 0), 0.0);
}

TEST(Impute, FullyMissingAttributeIsNamed) {
    const Dataset d = csv("a,b\n1,?\n2,?\n");
    try {
        impute(d);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
    }
}

TEST(Impute, PropertiesOverRandomTables) {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(30), nc = 1 + rng.below(5);
        std::vector<std::vector<double>> cols(nc, std::vector<double>(n));
        std::vector<std::vector<bool>> miss(nc, std::vector<bool>(n));
        for (std::size_t c = 0; c < nc; ++c) {
            for (std::size_t r = 0; r < n; ++r) {
                cols[c][r] = rng.uniform(-5, 5);
                miss[c][r] = rng.uniform() < 0.3;
            }
            miss[c][rng.below(n)] = false;
        }
        const Dataset d = column_table(cols, miss);
        for (auto policy : {ImputePolicy::mean, ImputePolicy::median, ImputePolicy::mode}) {
            const Dataset once = impute(d, policy);
            EXPECT_EQ(missing_stats(once).overall_fraction, 0.0);
            EXPECT_EQ(impute(once, policy).values(), once.values());  // idempotent
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < nc; ++c)
                    if (!d.is_missing(r, c)) { EXPECT_EQ(once.value(r, c), d.value(r, c)); }
        }
    }
}

// --- correlation_filter ------------------------------------------------------

TEST(CorrelationFilter, IdenticalColumnsDropSecond) {
    const auto res = correlation_filter(column_table({{1, 2, 3, 7}, {1, 2, 3, 7}}), 0.9);
    EXPECT_EQ(res.data.attribute_names(), (std::vector<std::string>{"c0"}));
    ASSERT_EQ(res.log.size(), 1u);
    std::ostringstream line;
    line << res.log[0];
    EXPECT_EQ(line.str().rfind("dropped c1 reason=corr r=", 0), 0u) << line.str();
}

TEST(CorrelationFilter, NegationDropsSecond) {
    const auto res = correlation_filter(column_table({{1, 2, 3, 7}, {-1, -2, -3, -7}}), 0.9);
    EXPECT_EQ(res.data.cols(), 1u);
    EXPECT_NEAR(res.log[0].r, -1.0, 1e-12);
}

TEST(CorrelationFilter, IndependentColumnsKept) {
    SplitMix64 rng(2024);
    std::vector<double> a(1000), b(1000);
    for (auto& x : a) x = rng.uniform();
    for (auto& x : b) x = rng.uniform();
    const double r = pearson(a, b);
    EXPECT_LT(std::abs(r), 0.1);
    EXPECT_EQ(correlation_filter(column_table({a, b}), 0.9).data.cols(), 2u);
}

TEST(CorrelationFilter, ExpertDropListAndUnknownName) {
    const Dataset d = column_table({{1, 2, 3}, {3, 1, 2}, {0, 5, 1}});
    const std::vector<std::string> drop{"c1"};
    const auto res = correlation_filter(d, 1.0, drop);
    EXPECT_EQ(res.data.attribute_names(), (std::vector<std::string>{"c0", "c2"}));
    std::ostringstream line;
    line << res.log.at(0);
    EXPECT_EQ(line.str(), "dropped c1 reason=expert r=NA");
    const std::vector<std::string> bad{"nope"};
    EXPECT_THROW(correlation_filter(d, 0.5, bad), InputError);
}

TEST(CorrelationFilter, ThresholdOneRemovesOnlyExactLinearCopies) {
    SplitMix64 rng(5);
    std::vector<double> a(50), near(50), twice(50);
    for (std::size_t i = 0; i < 50; ++i) {
        a[i] = rng.uniform();
        near[i] = a[i] + 1e-3 * rng.uniform();
        twice[i] = 2.0 * a[i] + 1.0;
    }
    const auto res = correlation_filter(column_table({a, near, twice}), 1.0);
    EXPECT_EQ(res.data.attribute_names(), (std::vector<std::string>{"c0", "c1"}));
}

// --- derive_label -----------------------------------------------------------

TEST(DeriveLabel, StageSubsetRelabels) {
    const Dataset d = csv("stage,x,chemo\n1,0.1,0\n2,0.2,1\n3,0.3,0\n4,0.4,1\n2,0.5,0\n");
    StageLabel spec{"stage", {2, 3}, {"chemo"}};
    const LabeledDataset ld = derive_label(d, spec);
    EXPECT_EQ(ld.size(), 3u);
    EXPECT_EQ(ld.labels(), (std::vector<std::size_t>{0, 1, 0}));
    EXPECT_EQ(ld.features().attribute_names(), (std::vector<std::string>{"x"}));
    EXPECT_EQ(ld.class_names(), (std::vector<std::string>{"stage_2", "stage_3"}));
}

TEST(DeriveLabel, SurvivalThreshold) {
    const Dataset d = csv("months,status,x\n10,1,0.5\n70,0,0.7\n");
    SurvivalLabel spec;
    spec.threshold_months = 60;
    const LabeledDataset ld = derive_label(d, spec);
    EXPECT_EQ(ld.labels(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(ld.features().attribute_names(), (std::vector<std::string>{"x"}));
}

TEST(DeriveLabel, EmptySubsetIsAnError) {
    const Dataset d = csv("stage,x\n1,0\n2,1\n");
    EXPECT_THROW(derive_label(d, StageLabel{"stage", {5}, {}}), InputError);
}

// --- split_kfold / split_holdout ---------------------------------------------

TEST(SplitKfold, TenIntoFiveFoldsOfTwo) {
    const auto plan = split_kfold(with_labels(std::vector<std::size_t>(10, 0), 1), 5, 3, false);
    std::vector<int> sizes(5, 0);
    for (auto f : plan.fold_assignment) ++sizes.at(f);
    EXPECT_EQ(sizes, (std::vector<int>(5, 2)));
}

TEST(SplitKfold, StratifiedBalancedClasses) {
    const auto ld = with_labels({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);
    const auto plan = split_kfold(ld, 5, 17, true);
    for (std::size_t f = 0; f < 5; ++f) {
        const auto s = plan.split(f);
        ASSERT_EQ(s.test.size(), 2u);
        EXPECT_NE(ld.label(s.test[0]), ld.label(s.test[1]));
    }
}

TEST(SplitKfold, SameSeedSamePlan) {
    const auto ld = with_labels({0, 1, 0, 1, 1, 0, 1}, 2);
    EXPECT_EQ(split_kfold(ld, 3, 8, true).fold_assignment, split_kfold(ld, 3, 8, true).fold_assignment);
    EXPECT_THROW(split_kfold(ld, 8, 8, true), InputError);
}

TEST(SplitKfold, PartitionPropertiesOverRandomInputs) {
    SplitMix64 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(120), classes = 1 + rng.below(std::min<std::size_t>(n, 4));
        std::vector<std::size_t> labels(n);
        for (auto& l : labels) l = rng.below(classes);
        for (std::size_t c = 0; c < classes && c < n; ++c) labels[c] = c;
        const std::size_t k = 2 + rng.below(std::min<std::size_t>(n - 1, 12));
        const bool stratified = rng.coin();
        const auto plan = split_kfold(labels, classes, k, rng(), stratified);
        std::vector<std::size_t> sizes(k, 0);
        std::vector<std::vector<std::size_t>> per_class(classes, std::vector<std::size_t>(k, 0));
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_LT(plan.fold_assignment[i], k);
            ++sizes[plan.fold_assignment[i]];
            ++per_class[labels[i]][plan.fold_assignment[i]];
        }
        EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1u);
        if (stratified) {
            for (const auto& pc : per_class)
                EXPECT_LE(*std::max_element(pc.begin(), pc.end()) - *std::min_element(pc.begin(), pc.end()), 1u);
        }
        std::set<std::size_t> seen;
        for (std::size_t f = 0; f < k; ++f) {
            const auto s = plan.split(f);
            EXPECT_EQ(s.train.size() + s.test.size(), n);
            for (auto i : s.test) EXPECT_TRUE(seen.insert(i).second);
        }
        EXPECT_EQ(seen.size(), n);
    }
}

TEST(SplitHoldout, RoundingAndDeterminism) {
    const auto hundred = with_labels(std::vector<std::size_t>(100, 0), 1);
    const auto s = split_holdout(hundred, 0.33, 1);
    EXPECT_EQ(s.test.size(), 33u);
    EXPECT_EQ(s.train.size(), 67u);
    const auto again = split_holdout(hundred, 0.33, 1);
    EXPECT_EQ(s.test, again.test);
    const auto three = split_holdout(with_labels({0, 0, 0}, 1), 0.33, 1);
    EXPECT_EQ(three.test.size(), 1u);
    EXPECT_EQ(three.train.size(), 2u);
    EXPECT_THROW(split_holdout(with_labels({0, 0, 0}, 1), 0.1, 1), InputError);
}

TEST(RegimeSpec, ParsesTags) {
    EXPECT_EQ(parse_regime("kfold10").tag(), "kfold10");
    EXPECT_EQ(parse_regime("holdout0.33").tag(), "holdout0.33");
    EXPECT_THROW(parse_regime("loo"), InputError);
}
