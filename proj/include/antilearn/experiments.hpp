#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "antilearn/cv.hpp"
#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/learner.hpp"
#include "antilearn/meta.hpp"
#include "antilearn/parallel.hpp"
#include "antilearn/rng.hpp"
#include "antilearn/survival.hpp"
#include "antilearn/synthgen.hpp"

namespace antilearn {

// ---------------------------------------------------------------------------
// Result rows

struct ExperimentResult {
    std::string experiment;
    std::string dataset_tag;
    std::string algorithm;
    std::string validation;
    std::uint64_t seed = 0;
    double sweep_value = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    /// Empty for multi-class rows.
    std::optional<double> inverted_test_accuracy;
    /// Stays 0 unless timing is requested, so result files are byte-stable.
    std::int64_t wallclock_ms = 0;

    bool operator==(const ExperimentResult&) const = default;
};

/// Aggregate over the rows sharing (experiment, dataset, algorithm,
/// validation, sweep value); also carries warnings for skipped cells.
struct SummaryRow {
    std::string experiment;
    std::string dataset_tag;
    std::string algorithm;
    std::string validation;
    double sweep_value = 0.0;
    std::size_t runs = 0;
    std::optional<std::size_t> train_size;
    double mean_train_accuracy = 0.0;
    double stdev_train_accuracy = 0.0;
    double mean_test_accuracy = 0.0;
    double stdev_test_accuracy = 0.0;
    std::string note;
};

inline SummaryRow summary_row(std::string experiment, std::string dataset_tag, std::string algorithm,
                              std::string validation, double sweep_value, std::size_t runs) {
    SummaryRow s;
    s.experiment = std::move(experiment);
    s.dataset_tag = std::move(dataset_tag);
    s.algorithm = std::move(algorithm);
    s.validation = std::move(validation);
    s.sweep_value = sweep_value;
    s.runs = runs;
    return s;
}

struct RunOptions {
    std::uint64_t master_seed = 1;
    std::size_t parallelism = 1;
    bool timing = false;
};

struct ExperimentOutput {
    std::vector<ExperimentResult> results;
    std::vector<SummaryRow> summary;
};

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double sample_stdev(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / double(v.size() - 1));
}

inline double mean_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

/// Group rows by (experiment, dataset, algorithm, validation, sweep value)
/// in order of first appearance.
inline std::vector<SummaryRow> summarize(std::span<const ExperimentResult> rows) {
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> train, test;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& s) {
            return s.experiment == r.experiment && s.dataset_tag == r.dataset_tag && s.algorithm == r.algorithm &&
                   s.validation == r.validation && s.sweep_value == r.sweep_value;
        });
        std::size_t g = static_cast<std::size_t>(it - out.begin());
        if (it == out.end()) {
            out.push_back(summary_row(r.experiment, r.dataset_tag, r.algorithm, r.validation, r.sweep_value, 0));
            train.emplace_back();
            test.emplace_back();
        }
        train[g].push_back(r.train_accuracy);
        test[g].push_back(r.test_accuracy);
    }
    for (std::size_t g = 0; g < out.size(); ++g) {
        out[g].runs = test[g].size();
        out[g].mean_train_accuracy = mean_of(train[g]);
        out[g].stdev_train_accuracy = sample_stdev(train[g]);
        out[g].mean_test_accuracy = mean_of(test[g]);
        out[g].stdev_test_accuracy = sample_stdev(test[g]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Emission

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw InputError("unknown output format '" + s + "' (expected csv or json)");
}

inline std::string extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write '" + path + "'");
    return os;
}

}  // namespace detail

inline void write_results_csv(std::ostream& os, std::span<const ExperimentResult> rows) {
    os << "experiment,dataset_tag,algorithm,validation,seed,sweep_value,train_accuracy,test_accuracy,"
          "inverted_test_accuracy,wallclock_ms\n";
    for (const auto& r : rows) {
        os << detail::csv_field(r.experiment) << ',' << detail::csv_field(r.dataset_tag) << ','
           << detail::csv_field(r.algorithm) << ',' << detail::csv_field(r.validation) << ',' << r.seed << ','
           << format_number(r.sweep_value) << ',' << format_number(r.train_accuracy) << ','
           << format_number(r.test_accuracy) << ','
           << (r.inverted_test_accuracy ? format_number(*r.inverted_test_accuracy) : std::string()) << ','
           << r.wallclock_ms << '\n';
    }
}

inline void write_results_json(std::ostream& os, std::span<const ExperimentResult> rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["experiment"] = r.experiment;
        j["dataset_tag"] = r.dataset_tag;
        j["algorithm"] = r.algorithm;
        j["validation"] = r.validation;
        j["seed"] = r.seed;
        j["sweep_value"] = r.sweep_value;
        j["train_accuracy"] = r.train_accuracy;
        j["test_accuracy"] = r.test_accuracy;
        if (r.inverted_test_accuracy) j["inverted_test_accuracy"] = *r.inverted_test_accuracy;
        else j["inverted_test_accuracy"] = nullptr;
        j["wallclock_ms"] = r.wallclock_ms;
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
}

inline std::vector<ExperimentResult> read_results_json(std::istream& is) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("results JSON: ") + e.what());
    }
    if (!arr.is_array()) throw InputError("results JSON: expected an array");
    std::vector<ExperimentResult> out;
    try {
        for (const auto& j : arr) {
            ExperimentResult r;
            r.experiment = j.at("experiment").get<std::string>();
            r.dataset_tag = j.at("dataset_tag").get<std::string>();
            r.algorithm = j.at("algorithm").get<std::string>();
            r.validation = j.at("validation").get<std::string>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.sweep_value = j.at("sweep_value").get<double>();
            r.train_accuracy = j.at("train_accuracy").get<double>();
            r.test_accuracy = j.at("test_accuracy").get<double>();
            if (!j.at("inverted_test_accuracy").is_null())
                r.inverted_test_accuracy = j.at("inverted_test_accuracy").get<double>();
            r.wallclock_ms = j.at("wallclock_ms").get<std::int64_t>();
            out.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("results JSON: ") + e.what());
    }
    return out;
}

inline void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
    os << "experiment,dataset_tag,algorithm,validation,sweep_value,runs,train_size,mean_train_accuracy,"
          "stdev_train_accuracy,mean_test_accuracy,stdev_test_accuracy,note\n";
    for (const auto& s : rows) {
        os << detail::csv_field(s.experiment) << ',' << detail::csv_field(s.dataset_tag) << ','
           << detail::csv_field(s.algorithm) << ',' << detail::csv_field(s.validation) << ','
           << format_number(s.sweep_value) << ',' << s.runs << ','
           << (s.train_size ? std::to_string(*s.train_size) : std::string()) << ','
           << format_number(s.mean_train_accuracy) << ',' << format_number(s.stdev_train_accuracy) << ','
           << format_number(s.mean_test_accuracy) << ',' << format_number(s.stdev_test_accuracy) << ','
           << detail::csv_field(s.note) << '\n';
    }
}

inline void write_summary_json(std::ostream& os, std::span<const SummaryRow> rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : rows) {
        nlohmann::ordered_json j;
        j["experiment"] = s.experiment;
        j["dataset_tag"] = s.dataset_tag;
        j["algorithm"] = s.algorithm;
        j["validation"] = s.validation;
        j["sweep_value"] = s.sweep_value;
        j["runs"] = s.runs;
        if (s.train_size) j["train_size"] = *s.train_size;
        else j["train_size"] = nullptr;
        j["mean_train_accuracy"] = s.mean_train_accuracy;
        j["stdev_train_accuracy"] = s.stdev_train_accuracy;
        j["mean_test_accuracy"] = s.mean_test_accuracy;
        j["stdev_test_accuracy"] = s.stdev_test_accuracy;
        j["note"] = s.note;
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
}

inline void emit_results(std::span<const ExperimentResult> rows, OutputFormat format, const std::string& path) {
    if (rows.empty()) throw InputError("emit_results: no results to write");
    auto os = detail::open_output(path);
    if (format == OutputFormat::csv) write_results_csv(os, rows);
    else write_results_json(os, rows);
    if (!os) throw InputError("failed writing '" + path + "'");
}

inline void emit_summary(std::span<const SummaryRow> rows, OutputFormat format, const std::string& path) {
    auto os = detail::open_output(path);
    if (format == OutputFormat::csv) write_summary_csv(os, rows);
    else write_summary_json(os, rows);
    if (!os) throw InputError("failed writing '" + path + "'");
}

inline void write_verdict_json(std::ostream& os, const AntiLearningVerdict& v) {
    nlohmann::ordered_json j;
    j["mean_test_accuracy"] = v.mean_test_accuracy;
    j["n_predictions"] = v.n_predictions;
    j["effective_n"] = v.effective_n;
    j["n_correct"] = v.n_correct;
    j["chance_level"] = v.chance_level;
    j["permutations"] = v.permutations;
    j["null_accuracy_sd"] = v.null_accuracy_sd;
    j["p_value_below_chance"] = v.p_value_below_chance;
    j["p_value_above_chance"] = v.p_value_above_chance;
    j["verdict"] = to_string(v.verdict);
    os << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Helpers shared by the drivers

namespace detail {

/// Re-throw learner errors with the grid cell they came from.
template <class F>
void in_cell(const std::string& context, F&& f) {
    try {
        f();
    } catch (const NumericalError& e) {
        throw NumericalError(context + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError(context + ": " + e.what());
    }
}

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
    std::int64_t elapsed_ms() const {
        if (!enabled_) return 0;
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

/// inverted = 1 - test; fl(t + fl(1 - t)) == 1 holds for every t in [0, 1].
inline std::optional<double> inverted_of(double test_accuracy, std::size_t n_classes) {
    if (n_classes != 2) return std::nullopt;
    return 1.0 - test_accuracy;
}

struct FoldScore {
    double train = 0.0;
    double test = 0.0;
};

inline std::string algorithm_label(const LearnerConfig& c) { return to_string(c.algorithm); }

}  // namespace detail

/// Online back-propagation preset that learns the 12-bit composite at large
/// training fractions: 24 hidden units, learning rate 0.07, hidden-layer
/// weights uniform in +-2, one sample per update, single binary output.
inline MlpConfig composite_mlp_preset() {
    MlpConfig m;
    m.hidden_units = 24;
    m.learning_rate = 0.05;
    m.epochs = 6000;
    m.output_mode = OutputMode::binary;
    m.batch_size = 1;
    m.init_scale = 1.5;
    return m;
}

inline LearnerConfig composite_learner_preset() {
    LearnerConfig c = LearnerConfig::of(Algorithm::mlp);
    c.mlp = composite_mlp_preset();
    return c;
}

// ---------------------------------------------------------------------------
// Bench: algorithms x validation regimes

/// Every (algorithm i, regime j) cell is evaluated over the regime's folds;
/// all algorithms of a regime share one fold plan. Rows hold the mean fold
/// accuracies; the summary carries per-regime Mean/StDev over algorithms.
inline ExperimentOutput run_bench(const LabeledDataset& data, std::span<const LearnerConfig> algorithms,
                                  std::span<const RegimeSpec> regimes, const RunOptions& opt,
                                  const std::string& dataset_tag = "dataset",
                                  const std::string& experiment = "bench") {
    if (algorithms.empty() || regimes.empty()) throw InputError("bench: need at least one algorithm and regime");
    std::vector<CVPlan> plans;
    for (std::size_t j = 0; j < regimes.size(); ++j)
        plans.push_back(regimes[j].plan(data, derive_seed(opt.master_seed, experiment + "-plan", {j})));

    struct Cell {
        std::size_t i, j, r;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        for (std::size_t j = 0; j < regimes.size(); ++j)
            for (std::size_t r = 0; r < plans[j].evaluations(); ++r) cells.push_back({i, j, r});

    std::vector<detail::FoldScore> scores(cells.size());
    std::vector<std::int64_t> ms(cells.size(), 0);
    parallel_for(cells.size(), opt.parallelism, [&](std::size_t c) {
        const auto [i, j, r] = cells[c];
        detail::in_cell(experiment + " cell (" + detail::algorithm_label(algorithms[i]) + ", " + regimes[j].tag() +
                            ", fold " + std::to_string(r) + ")",
                        [&] {
                            detail::Stopwatch sw(opt.timing);
                            const Split s = plans[j].split(r);
                            const LabeledDataset train_set = data.subset(s.train);
                            const auto model =
                                train(algorithms[i], train_set, derive_seed(opt.master_seed, experiment, {i, j, r}));
                            scores[c] = {accuracy(model, train_set), accuracy(model, data.subset(s.test))};
                            ms[c] = sw.elapsed_ms();
                        });
    });

    ExperimentOutput out;
    std::size_t c = 0;
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        for (std::size_t j = 0; j < regimes.size(); ++j) {
            std::vector<double> tr, te;
            std::int64_t total_ms = 0;
            for (std::size_t r = 0; r < plans[j].evaluations(); ++r, ++c) {
                tr.push_back(scores[c].train);
                te.push_back(scores[c].test);
                total_ms += ms[c];
            }
            ExperimentResult row;
            row.experiment = experiment;
            row.dataset_tag = dataset_tag;
            row.algorithm = detail::algorithm_label(algorithms[i]);
            row.validation = regimes[j].tag();
            row.seed = derive_seed(opt.master_seed, experiment, {i, j});
            row.train_accuracy = mean_of(tr);
            row.test_accuracy = mean_of(te);
            row.inverted_test_accuracy = detail::inverted_of(row.test_accuracy, data.n_classes());
            row.wallclock_ms = total_ms;
            out.results.push_back(std::move(row));
        }

    out.summary = summarize(out.results);
    for (std::size_t j = 0; j < regimes.size(); ++j) {
        std::vector<double> tr, te;
        for (const auto& row : out.results)
            if (row.validation == regimes[j].tag()) {
                tr.push_back(row.train_accuracy);
                te.push_back(row.test_accuracy);
            }
        SummaryRow mean = summary_row(experiment, dataset_tag, "Mean", regimes[j].tag(), 0.0, te.size());
        mean.mean_train_accuracy = mean_of(tr);
        mean.mean_test_accuracy = mean_of(te);
        SummaryRow sd = summary_row(experiment, dataset_tag, "StDev", regimes[j].tag(), 0.0, te.size());
        sd.mean_train_accuracy = sample_stdev(tr);
        sd.mean_test_accuracy = sample_stdev(te);
        sd.note = "columns hold the standard deviation over algorithms";
        out.summary.push_back(std::move(mean));
        out.summary.push_back(std::move(sd));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sample-size sweep on the composite

inline std::vector<double> default_sample_fractions() { return {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}; }

/// For each fraction x replicate: subsample the 4096-row composite, train the
/// MLP on the subsample and test on the complement.
inline ExperimentOutput run_sample_sweep(std::span<const double> fractions, std::size_t replicates,
                                         const MlpConfig& mlp, const RunOptions& opt) {
    if (fractions.empty()) throw InputError("sample-sweep: no fractions given");
    if (replicates < 1) throw InputError("sample-sweep: replicates must be at least 1");
    for (double f : fractions)
        if (!(f > 0.0 && f < 1.0)) throw InputError("sample-sweep: fraction " + format_number(f) + " outside (0, 1)");
    const LabeledDataset full = gen_composite_full();
    LearnerConfig cfg = LearnerConfig::of(Algorithm::mlp);
    cfg.mlp = mlp;

    const std::size_t n_cells = fractions.size() * replicates;
    std::vector<ExperimentResult> rows(n_cells);
    parallel_for(n_cells, opt.parallelism, [&](std::size_t c) {
        const std::size_t i = c / replicates, r = c % replicates;
        detail::in_cell("sample-sweep cell (fraction " + format_number(fractions[i]) + ", replicate " +
                            std::to_string(r) + ")",
                        [&] {
                            detail::Stopwatch sw(opt.timing);
                            const std::uint64_t seed = derive_seed(opt.master_seed, "sample-sweep", {i, 0, r});
                            const auto split = subsample(full, fractions[i], derive_seed(seed, "subsample", {}));
                            const auto model = train(cfg, split.train, derive_seed(seed, "train", {}));
                            ExperimentResult& row = rows[c];
                            row.experiment = "sample-sweep";
                            row.dataset_tag = "composite12";
                            row.algorithm = "mlp";
                            row.validation = "complement";
                            row.seed = seed;
                            row.sweep_value = fractions[i];
                            row.train_accuracy = accuracy(model, split.train);
                            row.test_accuracy = accuracy(model, split.test);
                            row.inverted_test_accuracy = detail::inverted_of(row.test_accuracy, 2);
                            row.wallclock_ms = sw.elapsed_ms();
                        });
    });
    ExperimentOutput out{std::move(rows), {}};
    out.summary = summarize(out.results);
    for (auto& s : out.summary)
        s.train_size = static_cast<std::size_t>(std::lround(s.sweep_value * double(full.size())));
    return out;
}

// ---------------------------------------------------------------------------
// Capacity sweep: hidden units on three kinds of data

inline std::vector<std::size_t> default_hidden_units() { return {1, 2, 3, 5, 7, 10, 15, 20}; }

struct CapacityOptions {
    std::vector<std::size_t> hidden_units = default_hidden_units();
    std::size_t replicates = 5;
    /// Learnable and random-label sets: n samples, the first n_train train.
    std::size_t n = 500;
    std::size_t n_train = 300;
    /// Composite training fraction inside the anti-learning dip; the model is
    /// tested on the complement.
    double anti_fraction = 0.1;
    MlpConfig mlp = composite_mlp_preset();
};

inline const char* capacity_dataset_tag(std::size_t j) {
    static const char* tags[] = {"antilearnable", "learnable", "random"};
    return tags[j];
}

/// One dataset per (kind j, replicate r), shared by all unit counts so the
/// curves compare like with like.
inline ExperimentOutput run_capacity_sweep(const CapacityOptions& cap, const RunOptions& opt) {
    if (cap.hidden_units.empty()) throw InputError("capacity-sweep: no hidden-unit counts given");
    if (cap.replicates < 1) throw InputError("capacity-sweep: replicates must be at least 1");
    if (cap.n_train < 2 || cap.n_train >= cap.n) throw InputError("capacity-sweep: need 2 <= n_train < n");
    const LabeledDataset full = gen_composite_full();

    struct Pair {
        LabeledDataset train, test;
    };
    std::vector<Pair> data(3 * cap.replicates);
    const std::vector<std::size_t> head = [&] {
        std::vector<std::size_t> v(cap.n_train);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
        return v;
    }();
    const std::vector<std::size_t> tail = [&] {
        std::vector<std::size_t> v;
        for (std::size_t i = cap.n_train; i < cap.n; ++i) v.push_back(i);
        return v;
    }();
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t r = 0; r < cap.replicates; ++r) {
            const std::uint64_t s = derive_seed(opt.master_seed, "capacity-data", {j, r});
            Pair& p = data[j * cap.replicates + r];
            if (j == 0) {
                auto split = subsample(full, cap.anti_fraction, s);
                p = {std::move(split.train), std::move(split.test)};
            } else {
                const LabeledDataset ld = j == 1 ? gen_learnable(cap.n, s) : gen_random_labels(cap.n, 12, s);
                p = {ld.subset(head), ld.subset(tail)};
            }
        }

    const std::size_t U = cap.hidden_units.size(), n_cells = U * 3 * cap.replicates;
    std::vector<ExperimentResult> rows(n_cells);
    parallel_for(n_cells, opt.parallelism, [&](std::size_t c) {
        const std::size_t i = c / (3 * cap.replicates), j = (c / cap.replicates) % 3, r = c % cap.replicates;
        detail::in_cell(std::string("capacity-sweep cell (") + std::to_string(cap.hidden_units[i]) + " units, " +
                            capacity_dataset_tag(j) + ", replicate " + std::to_string(r) + ")",
                        [&] {
                            detail::Stopwatch sw(opt.timing);
                            LearnerConfig cfg = LearnerConfig::of(Algorithm::mlp);
                            cfg.mlp = cap.mlp;
                            cfg.mlp.hidden_units = cap.hidden_units[i];
                            const Pair& p = data[j * cap.replicates + r];
                            const std::uint64_t seed = derive_seed(opt.master_seed, "capacity-sweep", {i, j, r});
                            const auto model = train(cfg, p.train, seed);
                            ExperimentResult& row = rows[c];
                            row.experiment = "capacity-sweep";
                            row.dataset_tag = capacity_dataset_tag(j);
                            row.algorithm = "mlp";
                            row.validation = j == 0 ? "complement" : "holdout";
                            row.seed = seed;
                            row.sweep_value = double(cap.hidden_units[i]);
                            row.train_accuracy = accuracy(model, p.train);
                            row.test_accuracy = accuracy(model, p.test);
                            row.inverted_test_accuracy = detail::inverted_of(row.test_accuracy, 2);
                            row.wallclock_ms = sw.elapsed_ms();
                        });
    });
    ExperimentOutput out{std::move(rows), {}};
    out.summary = summarize(out.results);
    return out;
}

// ---------------------------------------------------------------------------
// Invert bench: plain, inverted and inverted+boosted learners

enum class InvertStage { final, base };

inline InvertStage parse_invert_stage(const std::string& s) {
    if (s == "final") return InvertStage::final;
    if (s == "base") return InvertStage::base;
    throw InputError("unknown invert stage '" + s + "' (expected final or base)");
}

/// Three row families per algorithm: "<alg>", "<alg>+invert" and
/// "<alg>+invert+adaboost". With InvertStage::final the boosted ensemble's
/// output is inverted; with InvertStage::base boosting runs over inverted
/// members. The summary adds best-of-family rows per regime.
inline ExperimentOutput run_invert_bench(const LabeledDataset& data, std::span<const LearnerConfig> algorithms,
                                         std::size_t boosting_rounds, std::span<const RegimeSpec> regimes,
                                         InvertStage stage, const RunOptions& opt,
                                         const std::string& dataset_tag = "dataset") {
    if (data.n_classes() != 2) throw InputError("invert-bench: labels must be binary");
    if (algorithms.empty() || regimes.empty())
        throw InputError("invert-bench: need at least one algorithm and regime");
    std::vector<CVPlan> plans;
    for (std::size_t j = 0; j < regimes.size(); ++j)
        plans.push_back(regimes[j].plan(data, derive_seed(opt.master_seed, "invert-bench-plan", {j})));

    struct Cell {
        std::size_t i, j, r;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        for (std::size_t j = 0; j < regimes.size(); ++j)
            for (std::size_t r = 0; r < plans[j].evaluations(); ++r) cells.push_back({i, j, r});

    // Per cell: plain, inverted, inverted+boosted.
    std::vector<std::array<detail::FoldScore, 3>> scores(cells.size());
    std::vector<std::int64_t> ms(cells.size(), 0);
    std::vector<char> fell_back(cells.size(), 0);
    parallel_for(cells.size(), opt.parallelism, [&](std::size_t c) {
        const auto [i, j, r] = cells[c];
        detail::in_cell("invert-bench cell (" + detail::algorithm_label(algorithms[i]) + ", " + regimes[j].tag() +
                            ", fold " + std::to_string(r) + ")",
                        [&] {
                            detail::Stopwatch sw(opt.timing);
                            const Split s = plans[j].split(r);
                            const LabeledDataset tr = data.subset(s.train), te = data.subset(s.test);
                            const std::uint64_t seed = derive_seed(opt.master_seed, "invert-bench", {i, j, r});
                            const auto plain = train(algorithms[i], tr, seed);
                            const auto inverted = invert(plain);
                            scores[c][0] = {accuracy(plain, tr), accuracy(plain, te)};
                            scores[c][1] = {accuracy(inverted, tr), accuracy(inverted, te)};
                            const std::uint64_t boost_seed = derive_seed(seed, "boost", {});
                            if (stage == InvertStage::final) {
                                const auto ens = adaboost(algorithms[i], boosting_rounds, tr, boost_seed);
                                fell_back[c] = ens.fallback;
                                const auto boosted = invert(ens);
                                scores[c][2] = {accuracy(boosted, tr), accuracy(boosted, te)};
                            } else {
                                const auto boosted =
                                    adaboost_inverted_base(algorithms[i], boosting_rounds, tr, boost_seed);
                                fell_back[c] = boosted.fallback;
                                scores[c][2] = {accuracy(boosted, tr), accuracy(boosted, te)};
                            }
                            ms[c] = sw.elapsed_ms();
                        });
    });

    static const char* suffix[] = {"", "+invert", "+invert+adaboost"};
    ExperimentOutput out;
    std::vector<std::string> boost_notes;
    std::size_t c0 = 0;
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        for (std::size_t j = 0; j < regimes.size(); ++j) {
            const std::size_t folds = plans[j].evaluations();
            for (std::size_t v = 0; v < 3; ++v) {
                std::vector<double> tr, te;
                std::int64_t total_ms = 0;
                for (std::size_t r = 0; r < folds; ++r) {
                    tr.push_back(scores[c0 + r][v].train);
                    te.push_back(scores[c0 + r][v].test);
                    total_ms += v == 0 ? ms[c0 + r] : 0;
                }
                ExperimentResult row;
                row.experiment = "invert-bench";
                row.dataset_tag = dataset_tag;
                row.algorithm = detail::algorithm_label(algorithms[i]) + suffix[v];
                row.validation = regimes[j].tag();
                row.seed = derive_seed(opt.master_seed, "invert-bench", {i, j});
                row.sweep_value = double(v == 2 ? boosting_rounds : 0);
                row.train_accuracy = mean_of(tr);
                row.test_accuracy = mean_of(te);
                row.inverted_test_accuracy = detail::inverted_of(row.test_accuracy, 2);
                row.wallclock_ms = total_ms;
                out.results.push_back(std::move(row));
            }
            const auto n_fallback = std::count(fell_back.begin() + c0, fell_back.begin() + c0 + folds, 1);
            boost_notes.push_back(n_fallback == 0 ? std::string{}
                                                  : "no boosting round accepted in " + std::to_string(n_fallback) +
                                                        " of " + std::to_string(folds) +
                                                        " folds; used the unweighted base model there");
            c0 += folds;
        }

    out.summary = summarize(out.results);
    for (std::size_t i = 0; i < algorithms.size(); ++i)
        for (std::size_t j = 0; j < regimes.size(); ++j) {
            const auto& boosted = out.results[(i * regimes.size() + j) * 3 + 2];
            for (auto& s : out.summary)
                if (s.algorithm == boosted.algorithm && s.validation == boosted.validation)
                    s.note = boost_notes[i * regimes.size() + j];
        }
    static const char* family[] = {"best", "best+invert", "best+invert+adaboost"};
    for (std::size_t j = 0; j < regimes.size(); ++j)
        for (std::size_t v = 0; v < 3; ++v) {
            const ExperimentResult* best = nullptr;
            for (std::size_t i = 0; i < algorithms.size(); ++i) {
                const auto& row = out.results[(i * regimes.size() + j) * 3 + v];
                if (!best || row.test_accuracy > best->test_accuracy) best = &row;
            }
            SummaryRow s = summary_row("invert-bench", dataset_tag, family[v], regimes[j].tag(), best->sweep_value, 1);
            s.mean_train_accuracy = best->train_accuracy;
            s.mean_test_accuracy = best->test_accuracy;
            s.note = best->algorithm;
            out.summary.push_back(std::move(s));
        }
    return out;
}

/// Best test accuracy within one row family (0 plain, 1 inverted,
/// 2 inverted+boosted) of an invert-bench result list.
inline double best_of_family(std::span<const ExperimentResult> rows, std::size_t family) {
    double best = 0.0;
    for (const auto& r : rows) {
        const bool boosted = r.algorithm.ends_with("+invert+adaboost");
        const bool inverted = !boosted && r.algorithm.ends_with("+invert");
        const std::size_t f = boosted ? 2 : inverted ? 1 : 0;
        if (f == family) best = std::max(best, r.test_accuracy);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Survival-threshold sweep

inline std::vector<int> default_survival_thresholds() { return {12, 24, 36, 48, 60}; }

struct SurvivalSweepOptions {
    std::vector<int> thresholds = default_survival_thresholds();
    std::vector<LearnerConfig> algorithms = {LearnerConfig::of(Algorithm::naive_bayes),
                                             LearnerConfig::of(Algorithm::mlp), LearnerConfig::of(Algorithm::cart)};
    std::size_t folds = 10;
};

/// For each threshold: label survived / died (censored rows dropped), run
/// stratified k-fold CV for every algorithm and add an "average" row over the
/// algorithms. A threshold whose labels hold one class (or too few samples
/// per class to fill the folds' training sets) is skipped with a warning in
/// the summary.
inline ExperimentOutput run_survival_sweep(std::span<const SurvivalRecord> records, const Dataset& features,
                                           const SurvivalSweepOptions& so, const RunOptions& opt,
                                           const std::string& dataset_tag = "cohort") {
    if (records.size() != features.rows())
        throw InputError("survival: " + std::to_string(records.size()) + " records but " +
                         std::to_string(features.rows()) + " feature rows");
    if (so.algorithms.empty() || so.thresholds.empty())
        throw InputError("survival: need at least one algorithm and threshold");
    if (features.has_missing()) throw InputError("survival: impute missing feature values first");
    const std::string validation = "kfold" + std::to_string(so.folds);

    ExperimentOutput out;
    std::vector<std::pair<std::size_t, LabeledDataset>> usable;
    std::vector<CVPlan> plans;
    for (std::size_t j = 0; j < so.thresholds.size(); ++j) {
        const int t = so.thresholds[j];
        const auto outcomes = survival_labels(records, t);
        std::vector<std::size_t> rows, labels;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i] == SurvivalOutcome::censored) continue;
            rows.push_back(i);
            labels.push_back(outcomes[i] == SurvivalOutcome::survived ? 1 : 0);
        }
        std::size_t counts[2] = {0, 0};
        for (auto l : labels) ++counts[l];
        std::string problem;
        if (counts[0] == 0 || counts[1] == 0) problem = "single-class labels";
        else if (rows.size() < so.folds) problem = "fewer labelled samples than folds";
        else if (std::min(counts[0], counts[1]) < 2) problem = "a class has fewer than two samples";
        if (!problem.empty()) {
            SummaryRow w = summary_row("survival", dataset_tag, "warning", validation, double(t), 0);
            w.note = "skipped threshold " + std::to_string(t) + ": " + problem + " (died=" +
                     std::to_string(counts[0]) + ", survived=" + std::to_string(counts[1]) + ")";
            out.summary.push_back(std::move(w));
            continue;
        }
        LabeledDataset ld(features.select_rows(rows), std::move(labels), {"died", "survived"});
        plans.push_back(split_kfold(ld, so.folds, derive_seed(opt.master_seed, "survival-plan", {j}), true));
        usable.emplace_back(j, std::move(ld));
    }

    struct Cell {
        std::size_t u, i, r;
    };
    std::vector<Cell> cells;
    for (std::size_t u = 0; u < usable.size(); ++u)
        for (std::size_t i = 0; i < so.algorithms.size(); ++i)
            for (std::size_t r = 0; r < so.folds; ++r) cells.push_back({u, i, r});
    std::vector<detail::FoldScore> scores(cells.size());
    std::vector<std::int64_t> ms(cells.size(), 0);
    parallel_for(cells.size(), opt.parallelism, [&](std::size_t c) {
        const auto [u, i, r] = cells[c];
        const auto& [j, ld] = usable[u];
        detail::in_cell("survival cell (threshold " + std::to_string(so.thresholds[j]) + ", " +
                            detail::algorithm_label(so.algorithms[i]) + ", fold " + std::to_string(r) + ")",
                        [&] {
                            detail::Stopwatch sw(opt.timing);
                            const Split s = plans[u].split(r);
                            const LabeledDataset tr = ld.subset(s.train);
                            const auto model = train(so.algorithms[i], tr, derive_seed(opt.master_seed, "survival", {i, j, r}));
                            scores[c] = {accuracy(model, tr), accuracy(model, ld.subset(s.test))};
                            ms[c] = sw.elapsed_ms();
                        });
    });

    std::size_t c = 0;
    for (std::size_t u = 0; u < usable.size(); ++u) {
        const std::size_t j = usable[u].first;
        std::vector<double> alg_train, alg_test;
        for (std::size_t i = 0; i < so.algorithms.size(); ++i) {
            std::vector<double> tr, te;
            std::int64_t total_ms = 0;
            for (std::size_t r = 0; r < so.folds; ++r, ++c) {
                tr.push_back(scores[c].train);
                te.push_back(scores[c].test);
                total_ms += ms[c];
            }
            ExperimentResult row;
            row.experiment = "survival";
            row.dataset_tag = dataset_tag;
            row.algorithm = detail::algorithm_label(so.algorithms[i]);
            row.validation = validation;
            row.seed = derive_seed(opt.master_seed, "survival", {i, j});
            row.sweep_value = so.thresholds[j];
            row.train_accuracy = mean_of(tr);
            row.test_accuracy = mean_of(te);
            row.inverted_test_accuracy = detail::inverted_of(row.test_accuracy, 2);
            row.wallclock_ms = total_ms;
            alg_train.push_back(row.train_accuracy);
            alg_test.push_back(row.test_accuracy);
            out.results.push_back(std::move(row));
        }
        ExperimentResult avg;
        avg.experiment = "survival";
        avg.dataset_tag = dataset_tag;
        avg.algorithm = "average";
        avg.validation = validation;
        avg.seed = derive_seed(opt.master_seed, "survival", {j});
        avg.sweep_value = so.thresholds[j];
        avg.train_accuracy = mean_of(alg_train);
        avg.test_accuracy = mean_of(alg_test);
        avg.inverted_test_accuracy = detail::inverted_of(avg.test_accuracy, 2);
        out.results.push_back(std::move(avg));
    }
    auto summary = summarize(out.results);
    summary.insert(summary.end(), out.summary.begin(), out.summary.end());
    out.summary = std::move(summary);
    return out;
}

}  // namespace antilearn
