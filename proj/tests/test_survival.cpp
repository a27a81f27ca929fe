#include <gtest/gtest.h>

#include <sstream>

#include "antilearn/labels.hpp"
#include "antilearn/rng.hpp"
#include "antilearn/survival.hpp"

using namespace antilearn;

namespace {

SurvivalRecord rec(double months, SurvivalStatus s, std::string id = "p") {
    return {std::move(id), months, s, std::nullopt};
}

std::vector<SurvivalRecord> random_cohort(std::uint64_t seed, std::size_t n) {
    SplitMix64 rng(seed);
    std::vector<SurvivalRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto status = static_cast<SurvivalStatus>(rng.below(3));
        const double months = rng.coin() ? double(rng.below(120)) : rng.uniform(0.0, 120.0);
        out.push_back(rec(months, status, "p" + std::to_string(i)));
    }
    return out;
}

}  // namespace

TEST(CohortFilter, RuleExamples) {
    const std::vector<SurvivalRecord> in = {rec(70, SurvivalStatus::alive), rec(30, SurvivalStatus::dead_other),
                                            rec(30, SurvivalStatus::dead_crc), rec(60, SurvivalStatus::alive),
                                            rec(60, SurvivalStatus::dead_crc)};
    const auto out = cohort_filter(in);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].months, 70);
    EXPECT_EQ(out[1].status, SurvivalStatus::dead_crc);
    EXPECT_EQ(out[2].months, 60);
    EXPECT_EQ(out[2].status, SurvivalStatus::dead_crc);
}

TEST(CohortFilter, Idempotent) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto once = cohort_filter(random_cohort(s, 100), 48);
        const auto twice = cohort_filter(once, 48);
        ASSERT_EQ(once.size(), twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once[i].sample_id, twice[i].sample_id);
    }
}

TEST(SurvivalCurve, StepExample) {
    const std::vector<SurvivalRecord> cohort = {rec(10, SurvivalStatus::dead_crc), rec(80, SurvivalStatus::alive)};
    const auto c = survival_curve(cohort, 60);
    ASSERT_EQ(c.months_axis.size(), 61u);
    for (int m = 0; m <= 60; ++m) EXPECT_EQ(c.surviving_fraction[std::size_t(m)], m < 10 ? 1.0 : 0.5) << m;
}

TEST(SurvivalCurve, AllSurvivorsGiveConstantOne) {
    const std::vector<SurvivalRecord> cohort = {rec(61, SurvivalStatus::alive), rec(99, SurvivalStatus::dead_other)};
    for (double f : survival_curve(cohort, 60).surviving_fraction) EXPECT_EQ(f, 1.0);
}

TEST(SurvivalCurve, MonotoneFromOneOnRandomCohorts) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto cohort = cohort_filter(random_cohort(s, 1 + s % 40), 60);
        if (cohort.empty()) continue;
        // A death at month 0 would start the curve below 1.
        for (auto& r : cohort) r.months = std::max(r.months, 0.5);
        const auto c = survival_curve(cohort, 60);
        EXPECT_EQ(c.surviving_fraction.front(), 1.0);
        for (std::size_t m = 0; m < c.surviving_fraction.size(); ++m) {
            EXPECT_GE(c.surviving_fraction[m], 0.0);
            EXPECT_LE(c.surviving_fraction[m], 1.0);
            if (m > 0) { EXPECT_LE(c.surviving_fraction[m], c.surviving_fraction[m - 1]); }
        }
    }
}

TEST(SurvivalCurve, EmptyCohortThrows) {
    EXPECT_THROW(survival_curve(std::vector<SurvivalRecord>{}, 60), InputError);
}

TEST(SurvivalCurve, CsvHasTwoColumns) {
    std::ostringstream out;
    write_curve_csv(out, survival_curve(std::vector<SurvivalRecord>{rec(1, SurvivalStatus::dead_crc)}, 2));
    EXPECT_EQ(out.str(), "month,fraction\n0,1\n1,0\n2,0\n");
}

TEST(GroupMeanSurvival, Examples) {
    const std::vector<SurvivalRecord> r = {rec(10, SurvivalStatus::alive), rec(20, SurvivalStatus::alive),
                                           rec(30, SurvivalStatus::alive), rec(40, SurvivalStatus::alive)};
    const std::vector<int> groups = {0, 0, 1, 1};
    const auto g = group_mean_survival(r, groups);
    EXPECT_EQ(g.mean_months_low, 15.0);
    EXPECT_EQ(g.mean_months_high, 35.0);
    EXPECT_EQ(g.difference(), 20.0);

    const std::vector<int> mirrored = {0, 1, 0, 1};
    const std::vector<SurvivalRecord> same = {rec(10, SurvivalStatus::alive), rec(10, SurvivalStatus::alive),
                                              rec(90, SurvivalStatus::alive), rec(90, SurvivalStatus::alive)};
    const auto eq = group_mean_survival(same, mirrored);
    EXPECT_EQ(eq.difference(), 0.0);
    EXPECT_EQ(eq.mean_months_low, 35.0);  // 90 capped at 60

    EXPECT_THROW(group_mean_survival(r, std::vector<int>{0, 0, 0, 0}), InputError);
    EXPECT_THROW(group_mean_survival(r, std::vector<int>{0, 1}), InputError);
}

TEST(SurvivalLabels, RuleExamples) {
    EXPECT_EQ(survival_outcome(rec(70, SurvivalStatus::dead_crc), 60), SurvivalOutcome::survived);
    EXPECT_EQ(survival_outcome(rec(70, SurvivalStatus::alive), 60), SurvivalOutcome::survived);
    EXPECT_EQ(survival_outcome(rec(40, SurvivalStatus::dead_crc), 60), SurvivalOutcome::died);
    EXPECT_EQ(survival_outcome(rec(40, SurvivalStatus::dead_other), 60), SurvivalOutcome::died);
    EXPECT_EQ(survival_outcome(rec(40, SurvivalStatus::alive), 60), SurvivalOutcome::censored);
    EXPECT_EQ(survival_outcome(rec(60, SurvivalStatus::alive), 60), SurvivalOutcome::survived);
}

TEST(SurvivalLabels, MonotoneOverThresholds) {
    const auto cohort = random_cohort(17, 500);
    for (int t1 = 12; t1 <= 60; t1 += 6)
        for (int t2 = t1; t2 <= 60; t2 += 6) {
            const auto a = survival_labels(cohort, t1), b = survival_labels(cohort, t2);
            for (std::size_t i = 0; i < cohort.size(); ++i) {
                if (a[i] == SurvivalOutcome::censored || b[i] == SurvivalOutcome::censored) continue;
                if (b[i] == SurvivalOutcome::survived) { EXPECT_EQ(a[i], SurvivalOutcome::survived); }
            }
        }
}

TEST(StatusCoding, ParsesMappings) {
    const auto c = parse_status_coding("alive=A, dead_crc=D,dead_crc=X ,dead_other=O");
    EXPECT_EQ(c.at("A"), SurvivalStatus::alive);
    EXPECT_EQ(c.at("D"), SurvivalStatus::dead_crc);
    EXPECT_EQ(c.at("X"), SurvivalStatus::dead_crc);
    EXPECT_EQ(c.at("O"), SurvivalStatus::dead_other);
    EXPECT_THROW(parse_status_coding("zombie=3"), InputError);
    EXPECT_THROW(parse_status_coding("alive"), InputError);
}

TEST(SurvivalRecords, ReadFromDatasetColumns) {
    std::istringstream csv("id,months,status,stage,x\na,12,1,2,0.5\nb,70,0,1,0.1\nc,5,2,4,0.9\n");
    Schema schema{{"id", ColumnRole::id}};
    const auto d = parse_csv(csv, schema);
    SurvivalColumns cols;
    cols.stage = "stage";
    const auto r = survival_records(d, cols, default_status_coding());
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].sample_id, "a");
    EXPECT_EQ(r[0].status, SurvivalStatus::dead_crc);
    EXPECT_EQ(r[1].months, 70.0);
    EXPECT_EQ(r[2].status, SurvivalStatus::dead_other);
    EXPECT_EQ(r[2].stage, 4);

    std::istringstream bad("months,status\n12,9\n");
    EXPECT_THROW(survival_records(parse_csv(bad), SurvivalColumns{}, default_status_coding()), InputError);
    std::istringstream missing("months,status\n?,1\n");
    EXPECT_THROW(survival_records(parse_csv(missing), SurvivalColumns{}, default_status_coding()), InputError);
}
