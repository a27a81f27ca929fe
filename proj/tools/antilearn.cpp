#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "antilearn/experiments.hpp"
#include "antilearn/labels.hpp"

namespace fs = std::filesystem;
using namespace antilearn;

namespace {

const std::set<std::string> kGlobalKeys = {"seed", "out", "parallelism", "format", "timing"};
const std::vector<std::string> kSubcommands = {"synth",         "bench",        "sample-sweep", "capacity-sweep",
                                               "invert-bench",  "survival",     "detect"};

struct Globals {
    std::uint64_t seed = 1;
    std::string out = "results";
    std::size_t parallelism = 1;
    std::string format = "csv";
    bool timing = false;
    std::string config;
    std::vector<std::string> config_sets;
    std::vector<std::string> sets;

    RunOptions run() const { return {seed, parallelism, timing}; }
    OutputFormat output_format() const { return parse_format(format); }
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& text, const std::string& what, Parse parse) {
    std::vector<T> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(parse(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InputError("bad " + what + " '" + item + "'");
        }
    }
    if (out.empty()) throw InputError("empty " + what + " list");
    return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
    return parse_list<double>(text, what, [](const std::string& s, std::size_t* n) { return std::stod(s, n); });
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
    return parse_list<int>(text, what, [](const std::string& s, std::size_t* n) { return std::stoi(s, n); });
}

std::vector<std::size_t> parse_counts(const std::string& text, const std::string& what) {
    auto v = parse_ints(text, what);
    std::vector<std::size_t> out;
    for (int x : v) {
        if (x < 1) throw InputError(what + " must be positive");
        out.push_back(std::size_t(x));
    }
    return out;
}

/// Read a flat key=value config file. Global keys go straight to the front
/// of the command line, dotted keys become hyperparameter overrides and the
/// rest become options of the chosen subcommand, so that anything given on
/// the real command line is parsed later and wins.
void apply_config(std::vector<std::string>& args, std::vector<std::string>& config_sets) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file '" + path + "'");

    std::vector<std::string> global, local;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
        if (key.find('.') != std::string::npos) config_sets.push_back(key + "=" + value);
        else if (kGlobalKeys.count(key)) global.push_back("--" + key + "=" + value);
        else local.push_back("--" + key + "=" + value);
    }
    auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
        return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
    });
    if (sub != args.end()) args.insert(sub + 1, local.begin(), local.end());
    else if (!local.empty()) throw InputError("config file sets subcommand options but no subcommand was given");
    args.insert(args.begin() + 1, global.begin(), global.end());
}

LearnerConfig configure(Algorithm a, const Globals& g, bool composite_preset) {
    LearnerConfig c = LearnerConfig::of(a);
    if (composite_preset) c.mlp = composite_mlp_preset();
    for (const auto* list : {&g.config_sets, &g.sets})
        for (const auto& kv : *list) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
            c.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
    c.validate();
    return c;
}

std::vector<LearnerConfig> configure_all(const std::string& list, const Globals& g, bool composite_preset) {
    std::vector<LearnerConfig> out;
    for (const auto& name : split_list(list)) out.push_back(configure(parse_algorithm(name), g, composite_preset));
    if (out.empty()) throw InputError("no algorithms given");
    return out;
}

std::vector<RegimeSpec> parse_regimes(const std::string& list) {
    std::vector<RegimeSpec> out;
    for (const auto& r : split_list(list)) out.push_back(parse_regime(r));
    if (out.empty()) throw InputError("no validation regimes given");
    return out;
}

fs::path output_dir(const Globals& g) {
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec) throw InputError("cannot create output directory '" + g.out + "': " + ec.message());
    return g.out;
}

std::string percent(double fraction) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << 100.0 * fraction << '%';
    return os.str();
}

void emit(const std::string& experiment, const ExperimentOutput& out, const Globals& g) {
    const fs::path dir = output_dir(g);
    const auto fmt = g.output_format();
    const auto results = (dir / (experiment + extension(fmt))).string();
    const auto summary = (dir / (experiment + "_summary" + extension(fmt))).string();
    if (!out.results.empty()) emit_results(out.results, fmt, results);
    emit_summary(out.summary, fmt, summary);

    const bool sweep = experiment != "bench" && experiment != "invert-bench";
    for (const auto& s : out.summary) {
        std::cout << std::left << std::setw(26) << s.algorithm << ' ' << std::setw(12) << s.validation << ' '
                  << std::setw(22) << s.dataset_tag << ' ';
        if (s.algorithm == "warning") {
            std::cout << s.note << '\n';
            continue;
        }
        const bool aggregate = s.algorithm == "Mean" || s.algorithm == "StDev";
        if (sweep) std::cout << "x=" << std::setw(6) << format_number(s.sweep_value) << ' ';
        std::cout << "test " << std::right << std::setw(7) << percent(s.mean_test_accuracy);
        if (!aggregate && s.runs > 1) std::cout << " +- " << std::setw(7) << percent(s.stdev_test_accuracy);
        if (s.algorithm == "StDev") std::cout << "  (spread across algorithms)";
        else std::cout << "  train " << std::setw(7) << percent(s.mean_train_accuracy);
        if (!s.note.empty() && !aggregate) std::cout << "  [" << s.note << ']';
        std::cout << std::left << '\n';
    }
    if (!out.results.empty()) std::cout << "wrote " << results << '\n';
    std::cout << "wrote " << summary << '\n';
}

// ---------------------------------------------------------------------------
// Dataset sources shared by bench, invert-bench and detect

struct Source {
    std::string data, schema, label, stage_column, stages, hindsight, impute, drop;
    std::optional<double> corr_threshold;
    std::optional<int> survival_threshold;
    std::string months_column = "months", status_column = "status", status_coding;
    std::string synth;
    std::size_t n = 500, attributes = 12;
    std::optional<double> fraction;
};

void add_source_options(CLI::App* sub, Source& s) {
    sub->add_option("--data", s.data, "Input CSV file")->check(CLI::ExistingFile);
    sub->add_option("--schema", s.schema, "Schema file: one 'column=role' line per column")
        ->check(CLI::ExistingFile);
    sub->add_option("--label", s.label, "Use this integer column as the class label");
    sub->add_option("--stage-column", s.stage_column, "Classify the stage held in this column");
    sub->add_option("--stages", s.stages, "Comma-separated stage subset, e.g. 2,3 (default: all)");
    sub->add_option("--survival-threshold", s.survival_threshold,
                    "Classify survival at this many months (censored rows are dropped)");
    sub->add_option("--months-column", s.months_column, "Survival months column");
    sub->add_option("--status-column", s.status_column, "Survival status column");
    sub->add_option("--status-coding", s.status_coding, "e.g. alive=0,dead_crc=1,dead_other=2");
    sub->add_option("--hindsight", s.hindsight, "Comma-separated columns to remove from the features");
    sub->add_option("--impute", s.impute, "Continuous-column imputation: mean, median or mode");
    sub->add_option("--corr-threshold", s.corr_threshold, "Drop attributes correlated at |r| >= threshold");
    sub->add_option("--drop", s.drop, "Comma-separated attributes to drop before the correlation scan");
    sub->add_option("--synth", s.synth, "Synthetic dataset instead of --data: xor2, composite12, learnable, random");
    sub->add_option("--n", s.n, "Samples for learnable/random synthetic data")->check(CLI::PositiveNumber);
    sub->add_option("--attributes", s.attributes, "Attributes for random synthetic data")
        ->check(CLI::PositiveNumber);
    sub->add_option("--fraction", s.fraction, "Keep a random training fraction of the synthetic data");
}

LabeledDataset load_source(const Source& s, const Globals& g, std::string& tag) {
    if (s.synth.empty() == s.data.empty()) throw InputError("give exactly one of --data or --synth");
    if (!s.synth.empty()) {
        SynthSpec spec;
        spec.kind = parse_synth_kind(s.synth);
        spec.n_samples = s.n;
        spec.n_attributes = s.attributes;
        spec.seed = derive_seed(g.seed, "synth-data");
        LabeledDataset ld = generate(spec);
        tag = s.synth;
        if (s.fraction) {
            ld = subsample(ld, *s.fraction, derive_seed(g.seed, "synth-subsample")).train;
            tag += "-f" + format_number(*s.fraction);
        }
        return ld;
    }

    const Schema schema = s.schema.empty() ? Schema{} : load_schema(s.schema);
    const Dataset d = load_csv(s.data, schema);
    tag = fs::path(s.data).stem().string();
    const int label_kinds = int(!s.label.empty()) + int(!s.stage_column.empty()) + int(s.survival_threshold.has_value());
    if (label_kinds != 1) throw InputError("give exactly one of --label, --stage-column or --survival-threshold");
    const auto hindsight = split_list(s.hindsight);

    LabeledDataset ld;
    if (!s.label.empty()) {
        ld = label_from_column(d, s.label);
        ld = LabeledDataset(ld.features().drop_columns(hindsight), ld.labels(), ld.class_names());
    } else if (!s.stage_column.empty()) {
        StageLabel spec{s.stage_column, s.stages.empty() ? std::vector<int>{} : parse_ints(s.stages, "stage"),
                        hindsight};
        ld = derive_label(d, spec);
    } else {
        SurvivalLabel spec;
        spec.columns.months = s.months_column;
        spec.columns.status = s.status_column;
        spec.threshold_months = *s.survival_threshold;
        if (!s.status_coding.empty()) spec.coding = parse_status_coding(s.status_coding);
        spec.hindsight_columns = hindsight;
        ld = derive_label(d, spec);
    }

    Dataset features = ld.features();
    const auto stats = missing_stats(features);
    std::optional<ImputePolicy> policy;
    if (!s.impute.empty()) policy = parse_impute_policy(s.impute);
    if (features.has_missing()) {
        features = impute(features, policy);
        std::cerr << "imputed missing cells (overall fraction " << format_number(stats.overall_fraction) << ")\n";
    }
    const auto drop = split_list(s.drop);
    if (s.corr_threshold || !drop.empty()) {
        auto filtered = correlation_filter(features, s.corr_threshold.value_or(1.0), drop);
        for (const auto& e : filtered.log) std::cerr << e << '\n';
        features = std::move(filtered.data);
    }
    return LabeledDataset(std::move(features), ld.labels(), ld.class_names());
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
    Globals g;
    std::vector<std::string> args(argv, argv + argc);
    apply_config(args, g.config_sets);

    CLI::App app{"Anti-learning experiments: synthetic data, learners, inversion and survival analysis"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--parallelism", g.parallelism, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "Result file format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--timing", g.timing, "Record wall-clock milliseconds (makes files run-dependent)");
    app.add_option("--config", g.config, "Flat key=value config file; command-line flags take precedence");
    app.add_option("--set", g.sets, "Hyperparameter override key=value, e.g. mlp.hidden_units=24 (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset as CSV");
    std::string synth_kind = "composite12";
    std::size_t synth_n = 500, synth_attrs = 12;
    std::optional<double> synth_fraction;
    synth->add_option("--kind", synth_kind, "xor2, composite12, learnable or random");
    synth->add_option("--n", synth_n, "Samples for learnable/random")->check(CLI::PositiveNumber);
    synth->add_option("--attributes", synth_attrs, "Attributes for random")->check(CLI::PositiveNumber);
    synth->add_option("--fraction", synth_fraction, "Also split into a training fraction and its complement");

    // bench
    auto* bench = app.add_subcommand("bench", "Algorithms x validation regimes grid");
    Source bench_src;
    std::string bench_algs = "mlp,cart,naive_bayes,lssvm,knn", bench_regimes = "kfold10,kfold5,holdout0.33",
                bench_preset = "default";
    add_source_options(bench, bench_src);
    bench->add_option("--algorithms", bench_algs, "Comma-separated algorithms");
    bench->add_option("--regimes", bench_regimes, "Comma-separated regimes: kfoldK, holdoutF");
    bench->add_option("--preset", bench_preset, "MLP preset: default or composite")
        ->check(CLI::IsMember({"default", "composite"}));

    // sample-sweep
    auto* sweep = app.add_subcommand("sample-sweep", "Composite12 test accuracy against training fraction");
    std::string sweep_fractions = "0.01,0.02,0.05,0.1,0.2,0.3,0.5,0.7,0.9";
    std::size_t sweep_reps = 10;
    sweep->add_option("--fractions", sweep_fractions, "Comma-separated training fractions");
    sweep->add_option("--replicates", sweep_reps, "Replicates per fraction")->check(CLI::PositiveNumber);

    // capacity-sweep
    auto* cap = app.add_subcommand("capacity-sweep", "MLP hidden units on antilearnable, learnable and random data");
    CapacityOptions cap_opt;
    std::string cap_units = "1,2,3,5,7,10,15,20";
    cap->add_option("--hidden-units", cap_units, "Comma-separated hidden-unit counts");
    cap->add_option("--replicates", cap_opt.replicates, "Replicates per cell")->check(CLI::PositiveNumber);
    cap->add_option("--n", cap_opt.n, "Samples in the learnable and random sets");
    cap->add_option("--n-train", cap_opt.n_train, "Training samples in the learnable and random sets");
    cap->add_option("--anti-fraction", cap_opt.anti_fraction, "Composite12 training fraction");

    // invert-bench
    auto* inv = app.add_subcommand("invert-bench", "Plain, inverted and inverted+boosted learners");
    Source inv_src;
    std::string inv_algs = "mlp,cart,naive_bayes,lssvm,knn", inv_regimes = "kfold10", inv_stage = "final",
                inv_preset = "default";
    std::size_t inv_rounds = 10;
    add_source_options(inv, inv_src);
    inv->add_option("--algorithms", inv_algs, "Comma-separated algorithms");
    inv->add_option("--regimes", inv_regimes, "Comma-separated regimes: kfoldK, holdoutF");
    inv->add_option("--rounds", inv_rounds, "AdaBoost rounds")->check(CLI::PositiveNumber);
    inv->add_option("--invert-stage", inv_stage, "final: invert the boosted ensemble; base: boost inverted learners")
        ->check(CLI::IsMember({"final", "base"}));
    inv->add_option("--preset", inv_preset, "MLP preset: default or composite")
        ->check(CLI::IsMember({"default", "composite"}));

    // survival
    auto* surv = app.add_subcommand("survival", "Survival curves and survival-threshold prediction sweep");
    std::string surv_data, surv_schema, surv_months = "months", surv_status = "status", surv_stage, surv_coding,
                                        surv_thresholds = "12,24,36,48,60", surv_algs = "naive_bayes,mlp,cart",
                                        surv_hindsight, surv_impute, surv_group;
    std::size_t surv_folds = 10;
    int surv_horizon = 60;
    surv->add_option("--data", surv_data, "Input CSV file")->required()->check(CLI::ExistingFile);
    surv->add_option("--schema", surv_schema, "Schema file")->check(CLI::ExistingFile);
    surv->add_option("--months-column", surv_months, "Survival months column");
    surv->add_option("--status-column", surv_status, "Survival status column");
    surv->add_option("--status-coding", surv_coding, "e.g. alive=0,dead_crc=1,dead_other=2");
    surv->add_option("--stage-column", surv_stage, "Stage column: per-stage curves, removed from the features");
    surv->add_option("--thresholds", surv_thresholds, "Comma-separated month thresholds");
    surv->add_option("--algorithms", surv_algs, "Comma-separated algorithms");
    surv->add_option("--folds", surv_folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    surv->add_option("--horizon", surv_horizon, "Cohort and curve horizon in months")->check(CLI::NonNegativeNumber);
    surv->add_option("--hindsight", surv_hindsight, "Comma-separated columns to remove from the features");
    surv->add_option("--impute", surv_impute, "Continuous-column imputation: mean, median or mode");
    surv->add_option("--group-attribute", surv_group, "Binary column: report mean capped survival per group");

    // detect
    auto* det = app.add_subcommand("detect", "Anti-learning verdict from repeated cross-validation");
    Source det_src;
    std::string det_alg = "mlp", det_rule = "permutation", det_preset = "default";
    std::size_t det_repeats = 10, det_k = 10, det_permutations = kDefaultPermutations;
    double det_alpha = 0.05;
    add_source_options(det, det_src);
    det->add_option("--algorithm", det_alg, "Base learner");
    det->add_option("--repeats", det_repeats, "Cross-validation repeats")->check(CLI::PositiveNumber);
    det->add_option("--k", det_k, "Folds per repeat")->check(CLI::Range(2, 100000));
    det->add_option("--alpha", det_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    det->add_option("--rule", det_rule, "permutation, clustered_binomial or pooled_majority")
        ->check(CLI::IsMember({"permutation", "clustered_binomial", "pooled_majority"}));
    det->add_option("--permutations", det_permutations, "Label permutations for the permutation rule")
        ->check(CLI::Range(2, 100000));
    det->add_option("--preset", det_preset, "MLP preset: default or composite")
        ->check(CLI::IsMember({"default", "composite"}));

    std::reverse(args.begin(), args.end());
    args.pop_back();
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    parse_format(g.format);

    if (*synth) {
        SynthSpec spec;
        spec.kind = parse_synth_kind(synth_kind);
        spec.n_samples = synth_n;
        spec.n_attributes = synth_attrs;
        spec.seed = derive_seed(g.seed, "synth-data");
        const LabeledDataset ld = generate(spec);
        const fs::path dir = output_dir(g);
        auto write = [&](const LabeledDataset& d, const std::string& name) {
            const auto path = (dir / (name + ".csv")).string();
            auto os = detail::open_output(path);
            write_csv(os, d);
            if (!os) throw InputError("failed writing '" + path + "'");
            std::cout << "wrote " << path << " (" << d.size() << " rows)\n";
        };
        write(ld, synth_kind);
        if (synth_fraction) {
            const auto split = subsample(ld, *synth_fraction, derive_seed(g.seed, "synth-subsample"));
            write(split.train, synth_kind + "_train");
            write(split.test, synth_kind + "_test");
        }
        return 0;
    }

    if (*bench) {
        std::string tag;
        const auto data = load_source(bench_src, g, tag);
        const auto algs = configure_all(bench_algs, g, bench_preset == "composite");
        const auto regimes = parse_regimes(bench_regimes);
        emit("bench", run_bench(data, algs, regimes, g.run(), tag), g);
        return 0;
    }

    if (*sweep) {
        const auto fractions = parse_doubles(sweep_fractions, "fraction");
        const auto cfg = configure(Algorithm::mlp, g, true);
        emit("sample-sweep", run_sample_sweep(fractions, sweep_reps, cfg.mlp, g.run()), g);
        return 0;
    }

    if (*cap) {
        cap_opt.hidden_units = parse_counts(cap_units, "hidden-unit count");
        cap_opt.mlp = configure(Algorithm::mlp, g, true).mlp;
        emit("capacity-sweep", run_capacity_sweep(cap_opt, g.run()), g);
        return 0;
    }

    if (*inv) {
        std::string tag;
        const auto data = load_source(inv_src, g, tag);
        const auto algs = configure_all(inv_algs, g, inv_preset == "composite");
        const auto regimes = parse_regimes(inv_regimes);
        emit("invert-bench",
             run_invert_bench(data, algs, inv_rounds, regimes, parse_invert_stage(inv_stage), g.run(), tag), g);
        return 0;
    }

    if (*surv) {
        const Schema schema = surv_schema.empty() ? Schema{} : load_schema(surv_schema);
        const Dataset d = load_csv(surv_data, schema);
        SurvivalColumns cols;
        cols.months = surv_months;
        cols.status = surv_status;
        if (!surv_stage.empty()) cols.stage = surv_stage;
        const auto coding = surv_coding.empty() ? default_status_coding() : parse_status_coding(surv_coding);
        const auto records = survival_records(d, cols, coding);

        std::vector<std::string> drop = split_list(surv_hindsight);
        for (const auto& c : {surv_months, surv_status, surv_stage})
            if (!c.empty() && std::find(drop.begin(), drop.end(), c) == drop.end()) drop.push_back(c);
        for (const auto& c : drop) d.column(c);
        Dataset features = d.drop_columns(drop);
        if (features.has_missing())
            features = impute(features, surv_impute.empty() ? std::optional<ImputePolicy>{}
                                                            : std::optional{parse_impute_policy(surv_impute)});

        const fs::path dir = output_dir(g);
        auto write_curve = [&](std::span<const SurvivalRecord> cohort, const std::string& name) {
            if (cohort.empty()) {
                std::cerr << "warning: no patients left for curve '" << name << "'\n";
                return;
            }
            const auto curve = survival_curve(cohort, surv_horizon);
            const auto path = (dir / (name + ".csv")).string();
            auto os = detail::open_output(path);
            write_curve_csv(os, curve);
            const std::size_t at = std::min<std::size_t>(30, curve.surviving_fraction.size() - 1);
            std::cout << std::left << std::setw(28) << name << "n=" << std::setw(6) << cohort.size() << "month "
                      << at << ": " << percent(curve.surviving_fraction[at]) << "  wrote " << path << '\n';
        };
        const auto cohort = cohort_filter(records, surv_horizon);
        write_curve(cohort, "survival_curve");
        if (cols.stage) {
            std::set<int> stages;
            for (const auto& r : cohort)
                if (r.stage) stages.insert(*r.stage);
            for (int s : stages) {
                std::vector<SurvivalRecord> sub;
                for (const auto& r : cohort)
                    if (r.stage == s) sub.push_back(r);
                write_curve(sub, "survival_curve_stage" + std::to_string(s));
            }
        }
        if (!surv_group.empty()) {
            const std::size_t c = d.column(surv_group);
            std::vector<int> groups;
            for (std::size_t r = 0; r < d.rows(); ++r) {
                if (d.is_missing(r, c)) throw InputError("group attribute '" + surv_group + "' has missing values");
                groups.push_back(static_cast<int>(d.value(r, c)));
            }
            const auto gm = group_mean_survival(records, groups, surv_horizon);
            std::cout << surv_group << "=0 mean months " << format_number(gm.mean_months_low) << ", " << surv_group
                      << "=1 mean months " << format_number(gm.mean_months_high) << ", difference "
                      << format_number(gm.difference()) << '\n';
        }

        SurvivalSweepOptions so;
        so.thresholds = parse_ints(surv_thresholds, "threshold");
        for (int t : so.thresholds)
            if (t < 0) throw InputError("thresholds must be non-negative");
        so.algorithms = configure_all(surv_algs, g, false);
        so.folds = surv_folds;
        emit("survival", run_survival_sweep(records, features, so, g.run(), fs::path(surv_data).stem().string()), g);
        return 0;
    }

    if (*det) {
        std::string tag;
        const auto data = load_source(det_src, g, tag);
        const auto cfg = configure(parse_algorithm(det_alg), g, det_preset == "composite");
        const auto v = detect_antilearning(data, cfg, det_repeats, det_k, det_alpha, derive_seed(g.seed, "detect"),
                                           g.parallelism, parse_detector_rule(det_rule), det_permutations);
        const auto path = (output_dir(g) / "verdict.json").string();
        auto os = detail::open_output(path);
        write_verdict_json(os, v);
        if (!os) throw InputError("failed writing '" + path + "'");
        std::cout << "dataset " << tag << " (" << data.size() << " samples), " << cfg.describe() << '\n'
                  << "mean test accuracy " << percent(v.mean_test_accuracy) << " over " << v.n_predictions
                  << " predictions (" << det_rule << " rule)\n"
                  << "chance " << percent(v.chance_level);
        if (v.permutations > 0)
            std::cout << " (mean of " << v.permutations << " label permutations, sd " << percent(v.null_accuracy_sd)
                      << ")";
        std::cout << ", effective n " << v.effective_n << '\n'
                  << "p(below chance) " << format_number(v.p_value_below_chance) << ", p(above chance) "
                  << format_number(v.p_value_above_chance) << '\n'
                  << "verdict " << to_string(v.verdict) << '\n'
                  << "wrote " << path << '\n';
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
