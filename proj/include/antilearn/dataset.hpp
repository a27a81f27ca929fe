#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "antilearn/error.hpp"

namespace antilearn {

enum class AttributeKind { continuous, binary, categorical };

inline std::string_view to_string(AttributeKind k) {
    switch (k) {
        case AttributeKind::continuous: return "continuous";
        case AttributeKind::binary: return "binary";
        case AttributeKind::categorical: return "categorical";
    }
    return "continuous";
}

/// Rectangular feature table with an explicit missing-value mask.
///
/// Values and mask are stored row-major. A masked cell holds 0.0 but no
/// operation in the library reads it. Categorical columns carry their level
/// names (first-appearance order) so codes can be mapped back to text.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::vector<std::string> names, std::vector<AttributeKind> kinds,
            std::vector<double> values, std::vector<std::uint8_t> missing,
            std::vector<std::string> sample_ids,
            std::vector<std::vector<std::string>> levels = {})
        : names_(std::move(names)),
          kinds_(std::move(kinds)),
          values_(std::move(values)),
          missing_(std::move(missing)),
          ids_(std::move(sample_ids)),
          levels_(std::move(levels)) {
        if (levels_.empty()) levels_.resize(names_.size());
        validate();
    }

    std::size_t rows() const noexcept { return ids_.size(); }
    std::size_t cols() const noexcept { return names_.size(); }

    const std::vector<std::string>& attribute_names() const noexcept { return names_; }
    const std::vector<AttributeKind>& attribute_kinds() const noexcept { return kinds_; }
    const std::vector<std::string>& sample_ids() const noexcept { return ids_; }
    const std::vector<std::string>& levels(std::size_t col) const { return levels_.at(col); }
    const std::vector<std::vector<std::string>>& all_levels() const noexcept { return levels_; }

    AttributeKind kind(std::size_t col) const { return kinds_.at(col); }
    double value(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
    bool is_missing(std::size_t r, std::size_t c) const { return missing_[r * cols() + c] != 0; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols(), cols()};
    }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::uint8_t>& missing_mask() const noexcept { return missing_; }

    bool has_missing() const noexcept {
        return std::any_of(missing_.begin(), missing_.end(), [](auto m) { return m != 0; });
    }

    std::optional<std::size_t> find_column(std::string_view name) const {
        for (std::size_t c = 0; c < names_.size(); ++c)
            if (names_[c] == name) return c;
        return std::nullopt;
    }

    std::size_t column(std::string_view name) const {
        if (auto c = find_column(name)) return *c;
        throw InputError("unknown attribute '" + std::string(name) + "'");
    }

    Dataset select_rows(std::span<const std::size_t> rows_to_keep) const {
        const std::size_t nc = cols();
        std::vector<double> v;
        std::vector<std::uint8_t> m;
        std::vector<std::string> ids;
        v.reserve(rows_to_keep.size() * nc);
        m.reserve(rows_to_keep.size() * nc);
        for (std::size_t r : rows_to_keep) {
            v.insert(v.end(), values_.begin() + r * nc, values_.begin() + (r + 1) * nc);
            m.insert(m.end(), missing_.begin() + r * nc, missing_.begin() + (r + 1) * nc);
            ids.push_back(ids_.at(r));
        }
        return Dataset(names_, kinds_, std::move(v), std::move(m), std::move(ids), levels_);
    }

    Dataset select_columns(std::span<const std::size_t> cols_to_keep) const {
        std::vector<std::string> names;
        std::vector<AttributeKind> kinds;
        std::vector<std::vector<std::string>> levels;
        for (std::size_t c : cols_to_keep) {
            names.push_back(names_.at(c));
            kinds.push_back(kinds_[c]);
            levels.push_back(levels_[c]);
        }
        std::vector<double> v;
        std::vector<std::uint8_t> m;
        v.reserve(rows() * cols_to_keep.size());
        m.reserve(rows() * cols_to_keep.size());
        for (std::size_t r = 0; r < rows(); ++r) {
            for (std::size_t c : cols_to_keep) {
                v.push_back(value(r, c));
                m.push_back(missing_[r * cols() + c]);
            }
        }
        return Dataset(std::move(names), std::move(kinds), std::move(v), std::move(m), ids_,
                       std::move(levels));
    }

    Dataset drop_columns(std::span<const std::string> to_drop) const {
        std::vector<std::size_t> keep;
        for (std::size_t c = 0; c < cols(); ++c)
            if (std::find(to_drop.begin(), to_drop.end(), names_[c]) == to_drop.end())
                keep.push_back(c);
        return select_columns(keep);
    }

    /// Copy with different cell contents; names, kinds and ids are kept.
    Dataset with_values(std::vector<double> values, std::vector<std::uint8_t> missing) const {
        return Dataset(names_, kinds_, std::move(values), std::move(missing), ids_, levels_);
    }

private:
    void validate() const {
        if (kinds_.size() != names_.size())
            throw InputError("dataset: attribute kinds and names differ in length");
        if (levels_.size() != names_.size())
            throw InputError("dataset: level table and names differ in length");
        const std::size_t cells = ids_.size() * names_.size();
        if (values_.size() != cells || missing_.size() != cells)
            throw InputError("dataset: value/mask dimensions do not match rows x columns");
        for (std::size_t c = 0; c < names_.size(); ++c) {
            if (kinds_[c] != AttributeKind::binary) continue;
            for (std::size_t r = 0; r < ids_.size(); ++r) {
                if (is_missing(r, c)) continue;
                const double v = value(r, c);
                if (v != 0.0 && v != 1.0)
                    throw InputError("dataset: binary attribute '" + names_[c] +
                                     "' holds a non-0/1 value at row " + std::to_string(r));
            }
        }
    }

    std::vector<std::string> names_;
    std::vector<AttributeKind> kinds_;
    std::vector<double> values_;
    std::vector<std::uint8_t> missing_;
    std::vector<std::string> ids_;
    std::vector<std::vector<std::string>> levels_;
};

/// Features plus one resolved classification target.
class LabeledDataset {
public:
    LabeledDataset() = default;

    LabeledDataset(Dataset features, std::vector<std::size_t> labels,
                   std::vector<std::string> class_names)
        : features_(std::move(features)),
          labels_(std::move(labels)),
          class_names_(std::move(class_names)) {
        if (labels_.size() != features_.rows())
            throw InputError("labeled dataset: label count differs from sample count");
        for (std::size_t y : labels_)
            if (y >= class_names_.size())
                throw InputError("labeled dataset: label index out of range");
    }

    const Dataset& features() const noexcept { return features_; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t n_classes() const noexcept { return class_names_.size(); }
    std::size_t label(std::size_t i) const { return labels_.at(i); }
    std::span<const double> row(std::size_t i) const { return features_.row(i); }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(n_classes(), 0);
        for (std::size_t y : labels_) ++counts[y];
        return counts;
    }

    std::size_t classes_present() const {
        auto c = class_counts();
        return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](auto n) { return n > 0; }));
    }

    LabeledDataset subset(std::span<const std::size_t> idx) const {
        std::vector<std::size_t> y;
        y.reserve(idx.size());
        for (std::size_t i : idx) y.push_back(labels_.at(i));
        return LabeledDataset(features_.select_rows(idx), std::move(y), class_names_);
    }

private:
    Dataset features_;
    std::vector<std::size_t> labels_;
    std::vector<std::string> class_names_;
};

struct MissingReport {
    double overall_fraction = 0.0;
    std::vector<double> per_attribute_fraction;
    std::vector<double> per_sample_fraction;
};

inline MissingReport missing_stats(const Dataset& d) {
    MissingReport rep;
    rep.per_attribute_fraction.assign(d.cols(), 0.0);
    rep.per_sample_fraction.assign(d.rows(), 0.0);
    std::vector<std::size_t> col_count(d.cols(), 0);
    std::size_t total = 0;
    for (std::size_t r = 0; r < d.rows(); ++r) {
        std::size_t row_count = 0;
        for (std::size_t c = 0; c < d.cols(); ++c) {
            if (!d.is_missing(r, c)) continue;
            ++row_count;
            ++col_count[c];
        }
        total += row_count;
        if (d.cols() > 0) rep.per_sample_fraction[r] = double(row_count) / double(d.cols());
    }
    for (std::size_t c = 0; c < d.cols(); ++c)
        if (d.rows() > 0) rep.per_attribute_fraction[c] = double(col_count[c]) / double(d.rows());
    const std::size_t cells = d.rows() * d.cols();
    rep.overall_fraction = cells == 0 ? 0.0 : double(total) / double(cells);
    return rep;
}

// ---------------------------------------------------------------------------
// CSV input

/// Per-column override. `id` marks the column holding sample identifiers.
enum class ColumnRole { continuous, binary, categorical, id };

using Schema = std::map<std::string, ColumnRole, std::less<>>;

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline bool is_missing_token(std::string_view s) { return s.empty() || s == "?"; }

}  // namespace detail

inline ColumnRole parse_column_role(std::string_view s) {
    if (s == "continuous") return ColumnRole::continuous;
    if (s == "binary") return ColumnRole::binary;
    if (s == "categorical") return ColumnRole::categorical;
    if (s == "id") return ColumnRole::id;
    throw InputError("unknown attribute kind '" + std::string(s) + "'");
}

/// Schema override file: one `attribute_name=kind` per line, '#' comments.
inline Schema parse_schema(std::istream& in) {
    Schema schema;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError("schema line " + std::to_string(lineno) + ": expected name=kind");
        schema[detail::trim(t.substr(0, eq))] = parse_column_role(detail::trim(t.substr(eq + 1)));
    }
    return schema;
}

inline Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open schema file '" + path + "'");
    return parse_schema(in);
}

/// Parse a comma-separated table. Empty cells and "?" are missing. Row
/// numbers in errors are 1-based file lines (the header is line 1).
inline Dataset parse_csv(std::istream& in, const Schema& schema = {}) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: empty input, header row required");
    const auto header = detail::split_csv_line(line);
    const std::size_t width = header.size();

    std::vector<std::vector<std::string>> cells;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != width)
            throw InputError("csv: ragged row at line " + std::to_string(lineno) + ": expected " +
                             std::to_string(width) + " fields, found " +
                             std::to_string(fields.size()));
        cells.push_back(std::move(fields));
    }
    const std::size_t n = cells.size();
    std::optional<std::size_t> id_col;
    for (const auto& [name, role] : schema) {
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw InputError("schema names unknown column '" + name + "'");
        if (role == ColumnRole::id) {
            if (id_col) throw InputError("schema declares more than one id column");
            id_col = static_cast<std::size_t>(
                std::find(header.begin(), header.end(), name) - header.begin());
        }
    }

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < width; ++c)
        if (!id_col || c != *id_col) feature_cols.push_back(c);

    const std::size_t nc = feature_cols.size();
    std::vector<std::string> names;
    std::vector<AttributeKind> kinds;
    std::vector<std::vector<std::string>> levels(nc);
    std::vector<double> values(n * nc, 0.0);
    std::vector<std::uint8_t> missing(n * nc, 0);

    for (std::size_t j = 0; j < nc; ++j) {
        const std::size_t c = feature_cols[j];
        names.push_back(header[c]);
        std::optional<ColumnRole> forced;
        if (auto it = schema.find(header[c]); it != schema.end()) forced = it->second;

        bool numeric = true;
        bool zero_one = true;
        for (std::size_t r = 0; r < n; ++r) {
            const auto& s = cells[r][c];
            if (detail::is_missing_token(s)) continue;
            auto v = detail::parse_number(s);
            if (!v) {
                numeric = false;
                zero_one = false;
                break;
            }
            if (*v != 0.0 && *v != 1.0) zero_one = false;
        }

        AttributeKind kind;
        if (forced) {
            kind = *forced == ColumnRole::binary        ? AttributeKind::binary
                   : *forced == ColumnRole::categorical ? AttributeKind::categorical
                                                        : AttributeKind::continuous;
        } else if (numeric && zero_one) {
            kind = AttributeKind::binary;
        } else if (numeric) {
            kind = AttributeKind::continuous;
        } else {
            kind = AttributeKind::categorical;
        }
        kinds.push_back(kind);

        for (std::size_t r = 0; r < n; ++r) {
            const auto& s = cells[r][c];
            const std::size_t cell = r * nc + j;
            if (detail::is_missing_token(s)) {
                missing[cell] = 1;
                continue;
            }
            if (kind == AttributeKind::categorical) {
                auto& lv = levels[j];
                auto it = std::find(lv.begin(), lv.end(), s);
                if (it == lv.end()) {
                    lv.push_back(s);
                    it = lv.end() - 1;
                }
                values[cell] = static_cast<double>(it - lv.begin());
                continue;
            }
            auto v = detail::parse_number(s);
            if (!v)
                throw InputError("csv: unparseable numeric value '" + s + "' at data row " +
                                 std::to_string(r + 1) + ", column '" + header[c] + "'");
            if (kind == AttributeKind::binary && *v != 0.0 && *v != 1.0)
                throw InputError("csv: non-binary value '" + s + "' at data row " +
                                 std::to_string(r + 1) + ", column '" + header[c] + "'");
            values[cell] = *v;
        }
    }

    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
        ids.push_back(id_col ? cells[r][*id_col] : "row" + std::to_string(r + 1));

    return Dataset(std::move(names), std::move(kinds), std::move(values), std::move(missing),
                   std::move(ids), std::move(levels));
}

inline Dataset load_csv(const std::string& path, const Schema& schema = {}) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open csv file '" + path + "'");
    return parse_csv(in, schema);
}

/// Shortest round-trip text for a double.
inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_csv(std::ostream& out, const Dataset& d,
                      const std::vector<std::size_t>* labels = nullptr) {
    for (std::size_t c = 0; c < d.cols(); ++c) out << (c ? "," : "") << d.attribute_names()[c];
    if (labels) out << (d.cols() ? "," : "") << "label";
    out << '\n';
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t c = 0; c < d.cols(); ++c) {
            if (c) out << ',';
            if (d.is_missing(r, c)) {
                out << '?';
            } else if (d.kind(c) == AttributeKind::categorical && !d.levels(c).empty()) {
                out << d.levels(c).at(static_cast<std::size_t>(d.value(r, c)));
            } else {
                out << format_number(d.value(r, c));
            }
        }
        if (labels) out << (d.cols() ? "," : "") << (*labels)[r];
        out << '\n';
    }
}

inline void write_csv(std::ostream& out, const LabeledDataset& ld) {
    write_csv(out, ld.features(), &ld.labels());
}

// ---------------------------------------------------------------------------
// Imputation

enum class ImputePolicy { mean, median, mode };

inline ImputePolicy parse_impute_policy(const std::string& s) {
    if (s == "mean") return ImputePolicy::mean;
    if (s == "median") return ImputePolicy::median;
    if (s == "mode") return ImputePolicy::mode;
    throw InputError("unknown imputation policy '" + s + "' (expected mean, median or mode)");
}

namespace detail {

inline double mode_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double best = v.front();
    std::size_t best_run = 0;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if (j - i > best_run) {  // strict: earlier (lower) value wins ties
            best_run = j - i;
            best = v[i];
        }
        i = j;
    }
    return best;
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace detail

/// Fill masked cells column by column. `policy` applies to continuous
/// columns; binary and categorical columns always take the mode (ties go to
/// the lowest value) so their value domain is preserved. Without a policy,
/// continuous columns take the mean.
inline Dataset impute(const Dataset& d, std::optional<ImputePolicy> policy = std::nullopt) {
    std::vector<double> values = d.values();
    std::vector<std::uint8_t> missing(values.size(), 0);
    const std::size_t nc = d.cols();
    for (std::size_t c = 0; c < nc; ++c) {
        std::vector<double> observed;
        bool any_missing = false;
        for (std::size_t r = 0; r < d.rows(); ++r) {
            if (d.is_missing(r, c)) any_missing = true;
            else observed.push_back(d.value(r, c));
        }
        if (observed.empty() && d.rows() > 0)
            throw InputError("impute: attribute '" + d.attribute_names()[c] +
                             "' has no observed values; drop it first");
        if (!any_missing) continue;

        ImputePolicy p = ImputePolicy::mode;
        if (d.kind(c) == AttributeKind::continuous) p = policy.value_or(ImputePolicy::mean);
        double fill = 0.0;
        switch (p) {
            case ImputePolicy::mean: fill = detail::mean_of(observed); break;
            case ImputePolicy::median: fill = detail::median_of(std::move(observed)); break;
            case ImputePolicy::mode: fill = detail::mode_of(std::move(observed)); break;
        }
        for (std::size_t r = 0; r < d.rows(); ++r)
            if (d.is_missing(r, c)) values[r * nc + c] = fill;
    }
    return d.with_values(std::move(values), std::move(missing));
}

// ---------------------------------------------------------------------------
// Correlation-based attribute reduction

/// Pearson correlation; NaN when either column is constant.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

struct RemovalEntry {
    std::string name;
    enum class Reason { corr, expert } reason;
    double r;  // NaN for expert removals
};

inline std::ostream& operator<<(std::ostream& os, const RemovalEntry& e) {
    os << "dropped " << e.name << " reason=" << (e.reason == RemovalEntry::Reason::corr ? "corr" : "expert")
       << " r=";
    if (std::isnan(e.r)) os << "NA";
    else os << format_number(e.r);
    return os;
}

struct FilterResult {
    Dataset data;
    std::vector<RemovalEntry> log;
};

/// Slack on the |r| >= threshold comparison; an exact duplicate can compute
/// as |r| = 1 - 2e-16.
inline constexpr double kCorrelationSlack = 1e-12;

/// Drop the expert list, then scan column pairs (i < j) in order and remove
/// column j whenever |r(i, j)| >= threshold against a column still kept.
/// Constant columns have undefined r and are never removed by correlation.
inline FilterResult correlation_filter(const Dataset& d, double threshold,
                                       std::span<const std::string> drop_list = {}) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw InputError("correlation_filter: threshold must lie in (0, 1]");
    if (d.has_missing()) throw InputError("correlation_filter: impute missing values first");
    FilterResult out;
    for (const auto& name : drop_list) {
        if (!d.find_column(name))
            throw InputError("correlation_filter: drop-list attribute '" + name + "' not present");
        out.log.push_back({name, RemovalEntry::Reason::expert, std::numeric_limits<double>::quiet_NaN()});
    }
    const Dataset base = d.drop_columns(drop_list);

    std::vector<std::vector<double>> columns(base.cols(), std::vector<double>(base.rows()));
    for (std::size_t r = 0; r < base.rows(); ++r)
        for (std::size_t c = 0; c < base.cols(); ++c) columns[c][r] = base.value(r, c);

    std::vector<bool> removed(base.cols(), false);
    for (std::size_t i = 0; i < base.cols(); ++i) {
        if (removed[i]) continue;
        for (std::size_t j = i + 1; j < base.cols(); ++j) {
            if (removed[j]) continue;
            const double r = pearson(columns[i], columns[j]);
            if (!std::isnan(r) && std::abs(r) >= threshold - kCorrelationSlack) {
                removed[j] = true;
                out.log.push_back({base.attribute_names()[j], RemovalEntry::Reason::corr, r});
            }
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < base.cols(); ++c)
        if (!removed[c]) keep.push_back(c);
    out.data = base.select_columns(keep);
    return out;
}

}  // namespace antilearn
