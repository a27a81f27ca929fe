#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/survival.hpp"

namespace antilearn {

/// Classify stage: keep samples whose stage is in `subset` (all observed
/// stages when empty) and number the kept stages 0..C-1 in ascending order.
struct StageLabel {
    std::string stage_column;
    std::vector<int> subset;
    /// Columns recorded with hindsight of the outcome (treatment, other
    /// stagings); removed from the features along with the stage column.
    std::vector<std::string> hindsight_columns;
};

/// Classify survival at a month threshold; censored samples are dropped.
struct SurvivalLabel {
    SurvivalColumns columns;
    int threshold_months = 60;
    StatusCoding coding = default_status_coding();
    std::vector<std::string> hindsight_columns;
};

using LabelSpec = std::variant<StageLabel, SurvivalLabel>;

namespace detail {

inline std::vector<std::string> with_unique(std::vector<std::string> cols, std::initializer_list<std::string> more) {
    for (const auto& m : more)
        if (std::find(cols.begin(), cols.end(), m) == cols.end()) cols.push_back(m);
    return cols;
}

inline void require_columns(const Dataset& d, const std::vector<std::string>& cols) {
    for (const auto& c : cols) d.column(c);
}

}  // namespace detail

inline LabeledDataset derive_label(const Dataset& d, const StageLabel& spec) {
    const std::size_t sc = d.column(spec.stage_column);
    const auto drop = detail::with_unique(spec.hindsight_columns, {spec.stage_column});
    detail::require_columns(d, drop);

    std::set<int> wanted(spec.subset.begin(), spec.subset.end());
    if (wanted.empty())
        for (std::size_t r = 0; r < d.rows(); ++r)
            if (!d.is_missing(r, sc)) wanted.insert(static_cast<int>(d.value(r, sc)));

    std::vector<std::size_t> rows;
    std::vector<int> stages;
    for (std::size_t r = 0; r < d.rows(); ++r) {
        if (d.is_missing(r, sc)) continue;
        const int stage = static_cast<int>(d.value(r, sc));
        if (!wanted.count(stage)) continue;
        rows.push_back(r);
        stages.push_back(stage);
    }
    if (rows.empty()) throw InputError("derive_label: no samples fall in the requested stage subset");

    const std::vector<int> order(wanted.begin(), wanted.end());
    std::vector<std::string> names;
    for (int s : order) names.push_back("stage_" + std::to_string(s));
    std::vector<std::size_t> labels;
    for (int s : stages)
        labels.push_back(static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), s) - order.begin()));
    return LabeledDataset(d.select_rows(rows).drop_columns(drop), std::move(labels), std::move(names));
}

inline LabeledDataset derive_label(const Dataset& d, const SurvivalLabel& spec) {
    std::vector<std::string> drop = detail::with_unique(spec.hindsight_columns, {spec.columns.months, spec.columns.status});
    detail::require_columns(d, drop);
    const auto records = survival_records(d, spec.columns, spec.coding);
    std::vector<std::size_t> rows, labels;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto outcome = survival_outcome(records[r], spec.threshold_months);
        if (outcome == SurvivalOutcome::censored) continue;
        rows.push_back(r);
        labels.push_back(outcome == SurvivalOutcome::survived ? 1 : 0);
    }
    if (rows.empty()) throw InputError("derive_label: every sample is censored at this threshold");
    return LabeledDataset(d.select_rows(rows).drop_columns(drop), std::move(labels), {"died", "survived"});
}

inline LabeledDataset derive_label(const Dataset& d, const LabelSpec& spec) {
    return std::visit([&](const auto& s) { return derive_label(d, s); }, spec);
}

/// Use an existing 0..C-1 integer column as the label (synthetic CSVs carry
/// a final "label" column).
inline LabeledDataset label_from_column(const Dataset& d, const std::string& column) {
    const std::size_t c = d.column(column);
    std::vector<std::size_t> labels;
    std::size_t classes = 0;
    for (std::size_t r = 0; r < d.rows(); ++r) {
        if (d.is_missing(r, c)) throw InputError("label column '" + column + "' has missing values");
        const double v = d.value(r, c);
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw InputError("label column '" + column + "' must hold non-negative integers");
        labels.push_back(static_cast<std::size_t>(v));
        classes = std::max(classes, labels.back() + 1);
    }
    std::vector<std::string> names;
    for (std::size_t k = 0; k < classes; ++k)
        names.push_back(d.kind(c) == AttributeKind::categorical ? d.levels(c).at(k) : std::to_string(k));
    const std::vector<std::string> drop{column};
    return LabeledDataset(d.drop_columns(drop), std::move(labels), std::move(names));
}

}  // namespace antilearn
