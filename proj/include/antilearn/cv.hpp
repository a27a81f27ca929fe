#pragma once

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

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seed-derived partition of sample indices.
///
/// kfold: fold_assignment[i] in [0, k) and evaluation f tests on fold f.
/// holdout: fold_assignment[i] is 1 for test samples and 0 for training
/// samples; there is a single evaluation.
struct CVPlan {
    enum class Kind { kfold, holdout };

    Kind kind = Kind::kfold;
    std::size_t k = 0;
    double holdout_fraction = 0.0;
    std::uint64_t seed = 0;
    bool stratified = false;
    std::vector<std::size_t> fold_assignment;

    std::size_t evaluations() const noexcept { return kind == Kind::kfold ? k : 1; }

    Split split(std::size_t evaluation) const {
        const std::size_t test_fold = kind == Kind::kfold ? evaluation : 1;
        Split s;
        for (std::size_t i = 0; i < fold_assignment.size(); ++i)
            (fold_assignment[i] == test_fold ? s.test : s.train).push_back(i);
        return s;
    }
};

inline CVPlan split_kfold(std::span<const std::size_t> labels, std::size_t n_classes, std::size_t k,
                          std::uint64_t seed, bool stratified) {
    const std::size_t n = labels.size();
    if (k < 2) throw InputError("split_kfold: k must be at least 2");
    if (k > n)
        throw InputError("split_kfold: k = " + std::to_string(k) + " exceeds sample count " +
                         std::to_string(n));
    SplitMix64 rng(seed);
    std::vector<std::size_t> order;
    order.reserve(n);
    if (stratified) {
        std::vector<std::vector<std::size_t>> by_class(n_classes);
        for (std::size_t i = 0; i < n; ++i) by_class.at(labels[i]).push_back(i);
        for (std::size_t c = 0; c < n_classes; ++c)
            if (by_class[c].empty())
                throw InputError("split_kfold: stratified plan needs every class present (class " +
                                 std::to_string(c) + " is empty)");
        // Dealing the concatenated per-class shuffles round-robin keeps both
        // the fold sizes and the per-class fold counts within one of each other.
        for (auto& members : by_class) {
            shuffle(members, rng);
            order.insert(order.end(), members.begin(), members.end());
        }
    } else {
        order = iota_indices(n);
        shuffle(order, rng);
    }
    CVPlan plan;
    plan.kind = CVPlan::Kind::kfold;
    plan.k = k;
    plan.seed = seed;
    plan.stratified = stratified;
    plan.fold_assignment.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) plan.fold_assignment[order[pos]] = pos % k;
    return plan;
}

inline CVPlan split_kfold(const LabeledDataset& ld, std::size_t k, std::uint64_t seed,
                          bool stratified) {
    return split_kfold(ld.labels(), ld.n_classes(), k, seed, stratified);
}

/// Random holdout with test size round(fraction * n).
inline CVPlan holdout_plan(std::size_t n, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InputError("split_holdout: fraction must lie in (0, 1)");
    const auto n_test = static_cast<std::size_t>(std::lround(fraction * double(n)));
    if (n_test == 0 || n_test >= n)
        throw InputError("split_holdout: fraction " + format_number(fraction) + " on " +
                         std::to_string(n) + " samples leaves an empty train or test set");
    SplitMix64 rng(seed);
    auto order = iota_indices(n);
    shuffle(order, rng);
    CVPlan plan;
    plan.kind = CVPlan::Kind::holdout;
    plan.holdout_fraction = fraction;
    plan.seed = seed;
    plan.fold_assignment.assign(n, 0);
    for (std::size_t pos = 0; pos < n_test; ++pos) plan.fold_assignment[order[pos]] = 1;
    return plan;
}

inline Split split_holdout(const LabeledDataset& ld, double fraction, std::uint64_t seed) {
    return holdout_plan(ld.size(), fraction, seed).split(0);
}

/// A validation regime description, e.g. "kfold10", "kfold5", "holdout0.33".
struct RegimeSpec {
    CVPlan::Kind kind = CVPlan::Kind::kfold;
    std::size_t k = 10;
    double fraction = 0.33;
    bool stratified = true;

    std::string tag() const {
        return kind == CVPlan::Kind::kfold ? "kfold" + std::to_string(k)
                                           : "holdout" + format_number(fraction);
    }

    CVPlan plan(const LabeledDataset& ld, std::uint64_t seed) const {
        return kind == CVPlan::Kind::kfold ? split_kfold(ld, k, seed, stratified)
                                           : holdout_plan(ld.size(), fraction, seed);
    }
};

inline RegimeSpec parse_regime(const std::string& text) {
    RegimeSpec r;
    try {
        if (text.rfind("kfold", 0) == 0) {
            r.kind = CVPlan::Kind::kfold;
            r.k = std::stoul(text.substr(5));
            if (r.k < 2) throw InputError("");
            return r;
        }
        if (text.rfind("holdout", 0) == 0) {
            r.kind = CVPlan::Kind::holdout;
            r.fraction = std::stod(text.substr(7));
            if (!(r.fraction > 0.0 && r.fraction < 1.0)) throw InputError("");
            return r;
        }
    } catch (const std::exception&) {
    }
    throw InputError("unknown validation regime '" + text + "' (expected kfoldK or holdoutF)");
}

}  // namespace antilearn
