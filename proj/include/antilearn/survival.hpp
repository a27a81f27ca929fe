#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"

namespace antilearn {

enum class SurvivalStatus { alive, dead_crc, dead_other };

struct SurvivalRecord {
    std::string sample_id;
    double months = 0.0;
    SurvivalStatus status = SurvivalStatus::alive;
    std::optional<int> stage;
};

struct SurvivalCurve {
    std::vector<int> months_axis;
    std::vector<double> surviving_fraction;
};

/// Keep patients followed past `horizon` months and those who died of the
/// cancer within it; everyone else (censored or other-cause deaths inside the
/// horizon) is removed.
inline std::vector<SurvivalRecord> cohort_filter(std::span<const SurvivalRecord> records, int horizon = 60) {
    std::vector<SurvivalRecord> out;
    for (const auto& r : records)
        if (r.months > horizon || (r.status == SurvivalStatus::dead_crc && r.months <= horizon)) out.push_back(r);
    return out;
}

/// Empirical step curve on integer months 0..horizon:
/// fraction[m] = share of the cohort with months > m or status != dead_crc.
/// A death recorded at month t counts from month t onwards.
inline SurvivalCurve survival_curve(std::span<const SurvivalRecord> cohort, int horizon) {
    if (cohort.empty()) throw InputError("survival_curve: empty cohort");
    if (horizon < 0) throw InputError("survival_curve: horizon must be non-negative");
    SurvivalCurve c;
    for (int m = 0; m <= horizon; ++m) {
        std::size_t alive = 0;
        for (const auto& r : cohort)
            if (r.status != SurvivalStatus::dead_crc || r.months > m) ++alive;
        c.months_axis.push_back(m);
        c.surviving_fraction.push_back(double(alive) / double(cohort.size()));
    }
    return c;
}

inline void write_curve_csv(std::ostream& os, const SurvivalCurve& c) {
    os << "month,fraction\n";
    for (std::size_t i = 0; i < c.months_axis.size(); ++i)
        os << c.months_axis[i] << ',' << format_number(c.surviving_fraction[i]) << '\n';
}

struct GroupSurvival {
    double mean_months_low = 0.0;
    double mean_months_high = 0.0;
    double difference() const noexcept { return mean_months_high - mean_months_low; }
};

/// Mean of min(months, cap) in the attribute = 0 and attribute = 1 groups.
inline GroupSurvival group_mean_survival(std::span<const SurvivalRecord> records,
                                         std::span<const int> attribute_values, int cap = 60) {
    if (records.size() != attribute_values.size())
        throw InputError("group_mean_survival: attribute values do not align with records");
    double sum[2] = {0.0, 0.0};
    std::size_t n[2] = {0, 0};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const int a = attribute_values[i];
        if (a != 0 && a != 1) throw InputError("group_mean_survival: attribute values must be 0 or 1");
        sum[a] += std::min(records[i].months, double(cap));
        ++n[a];
    }
    if (n[0] == 0 || n[1] == 0) throw InputError("group_mean_survival: one attribute group is empty");
    return {sum[0] / double(n[0]), sum[1] / double(n[1])};
}

enum class SurvivalOutcome { died, survived, censored };

/// Survived iff followed for at least `threshold_months`. Patients still alive
/// with shorter follow-up are censored: their outcome at the threshold is unknown.
inline SurvivalOutcome survival_outcome(const SurvivalRecord& r, int threshold_months) {
    if (r.months >= threshold_months) return SurvivalOutcome::survived;
    if (r.status == SurvivalStatus::alive) return SurvivalOutcome::censored;
    return SurvivalOutcome::died;
}

inline std::vector<SurvivalOutcome> survival_labels(std::span<const SurvivalRecord> records, int threshold_months) {
    std::vector<SurvivalOutcome> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(survival_outcome(r, threshold_months));
    return out;
}

/// Text code -> status, e.g. {"0": alive, "1": dead_crc, "2": dead_other}.
using StatusCoding = std::map<std::string, SurvivalStatus, std::less<>>;

inline StatusCoding default_status_coding() {
    return {{"0", SurvivalStatus::alive}, {"1", SurvivalStatus::dead_crc}, {"2", SurvivalStatus::dead_other}};
}

/// Parse "alive=0,dead_crc=1,dead_other=2" (several codes per status allowed).
inline StatusCoding parse_status_coding(const std::string& text) {
    StatusCoding coding;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string item = detail::trim(std::string_view(text).substr(start, end - start));
        start = end + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("status coding: expected status=code, got '" + item + "'");
        const std::string status = detail::trim(item.substr(0, eq));
        const std::string code = detail::trim(item.substr(eq + 1));
        if (status == "alive") coding[code] = SurvivalStatus::alive;
        else if (status == "dead_crc") coding[code] = SurvivalStatus::dead_crc;
        else if (status == "dead_other") coding[code] = SurvivalStatus::dead_other;
        else throw InputError("status coding: unknown status '" + status + "'");
    }
    return coding;
}

struct SurvivalColumns {
    std::string months = "months";
    std::string status = "status";
    std::optional<std::string> stage;
};

/// Text form of a cell: the level name for categorical columns, otherwise the
/// shortest round-trip number.
inline std::string cell_text(const Dataset& d, std::size_t r, std::size_t c) {
    if (d.kind(c) == AttributeKind::categorical && !d.levels(c).empty())
        return d.levels(c).at(static_cast<std::size_t>(d.value(r, c)));
    return format_number(d.value(r, c));
}

inline SurvivalRecord survival_record(const Dataset& d, std::size_t r, const SurvivalColumns& cols,
                                      const StatusCoding& coding) {
    const std::size_t mc = d.column(cols.months), sc = d.column(cols.status);
    if (d.is_missing(r, mc) || d.is_missing(r, sc))
        throw InputError("survival: row " + d.sample_ids()[r] + " lacks months or status");
    SurvivalRecord rec;
    rec.sample_id = d.sample_ids()[r];
    rec.months = d.value(r, mc);
    if (!std::isfinite(rec.months) || rec.months < 0.0)
        throw InputError("survival: row " + rec.sample_id + " has invalid months");
    const std::string code = cell_text(d, r, sc);
    auto it = coding.find(code);
    if (it == coding.end()) throw InputError("survival: unknown status code '" + code + "' at row " + rec.sample_id);
    rec.status = it->second;
    if (cols.stage) {
        const std::size_t st = d.column(*cols.stage);
        if (!d.is_missing(r, st)) rec.stage = static_cast<int>(d.value(r, st));
    }
    return rec;
}

inline std::vector<SurvivalRecord> survival_records(const Dataset& d, const SurvivalColumns& cols,
                                                    const StatusCoding& coding = default_status_coding()) {
    std::vector<SurvivalRecord> out;
    out.reserve(d.rows());
    for (std::size_t r = 0; r < d.rows(); ++r) out.push_back(survival_record(d, r, cols, coding));
    return out;
}

}  // namespace antilearn
