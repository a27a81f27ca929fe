#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "antilearn/cv.hpp"
#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/learner.hpp"
#include "antilearn/parallel.hpp"
#include "antilearn/rng.hpp"

namespace antilearn {

// ---------------------------------------------------------------------------
// Inversion

/// Predicts the complement class of a two-class model. Two-element score
/// vectors (posteriors, votes) are swapped; a single decision value is negated.
template <class Inner>
class InvertedModel {
public:
    explicit InvertedModel(Inner inner) : inner_(std::move(inner)) {
        if (inner_.n_classes() != 2) throw InputError("invert: model must be binary");
    }

    Prediction predict(std::span<const double> x) const {
        Prediction p = inner_.predict(x);
        p.label = 1 - p.label;
        if (p.scores.size() == 2) std::swap(p.scores[0], p.scores[1]);
        else
            for (double& s : p.scores) s = -s;
        return p;
    }

    std::size_t n_classes() const noexcept { return 2; }
    const Inner& inner() const noexcept { return inner_; }

private:
    Inner inner_;
};

template <class Inner>
InvertedModel<Inner> invert(Inner m) {
    return InvertedModel<Inner>(std::move(m));
}

// ---------------------------------------------------------------------------
// Ensembles

enum class Combination { weighted_vote, majority_vote };

template <class Member>
struct Ensemble {
    std::vector<Member> members;
    std::vector<double> member_weights;
    Combination combination = Combination::majority_vote;
    std::size_t classes = 2;
    /// Weighted training error of each accepted AdaBoost round.
    std::vector<double> round_errors;
    /// True when no AdaBoost round was accepted and the ensemble holds the
    /// base model trained on the unweighted data instead.
    bool fallback = false;

    std::size_t n_classes() const noexcept { return classes; }

    /// weighted_vote (binary): score = sum alpha * (+1 for class 1, -1 for
    /// class 0), class 1 iff score > 0. majority_vote: per-class vote
    /// fractions, ties to the lowest class.
    Prediction predict(std::span<const double> x) const {
        if (combination == Combination::weighted_vote) {
            double score = 0.0;
            for (std::size_t i = 0; i < members.size(); ++i)
                score += member_weights[i] * (members[i].predict(x).label == 1 ? 1.0 : -1.0);
            return {score > 0.0 ? std::size_t{1} : std::size_t{0}, {score}};
        }
        std::vector<double> votes(classes, 0.0);
        for (const auto& m : members) votes[m.predict(x).label] += 1.0 / double(members.size());
        const std::size_t label = argmax_low(votes);
        return {label, std::move(votes)};
    }
};

/// alpha = 1/2 ln((1 - eps) / eps). eps = 0 is clamped to 1e-10 so the
/// weight stays finite.
inline double adaboost_alpha(double eps) {
    eps = std::max(eps, 1e-10);
    return 0.5 * std::log((1.0 - eps) / eps);
}

/// Draw n indices with probability proportional to `weights`.
inline std::vector<std::size_t> weighted_resample(std::span<const double> weights, std::size_t n,
                                                  SplitMix64& rng) {
    std::vector<double> cdf(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) cdf[i] = acc += weights[i];
    std::vector<std::size_t> out(n);
    for (auto& o : out) {
        const double u = rng.uniform() * acc;
        o = std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()),
                                  weights.size() - 1);
    }
    return out;
}

inline constexpr std::size_t kMaxConsecutiveDiscards = 5;

using RoundObserver = std::function<void(std::span<const double> sample_weights)>;

/// AdaBoost.M1 over an arbitrary member trainer
/// `train_member(const LabeledDataset&, std::uint64_t seed) -> Member`.
///
/// Each round trains on a weighted resample drawn with sub-seed
/// derive_seed(seed, "adaboost", {round, attempt}). A round whose weighted
/// error is >= 0.5 (or whose resample holds a single class) is discarded and
/// redrawn; five consecutive discards end boosting. eps = 0 keeps the member
/// and ends boosting. If no round is accepted at all, the ensemble falls back
/// to one member trained on the unweighted data with weight 1, so a failing
/// base learner is never silently turned into its inversion.
template <class TrainMember>
auto adaboost_with(TrainMember&& train_member, std::size_t rounds, const LabeledDataset& data,
                   std::uint64_t seed, const RoundObserver& on_round = {}) {
    using Member = std::decay_t<decltype(train_member(data, seed))>;
    if (data.n_classes() != 2) throw InputError("adaboost: labels must be binary");
    if (rounds < 1) throw InputError("adaboost: rounds must be at least 1");
    const std::size_t n = data.size();
    Ensemble<Member> ens;
    ens.combination = Combination::weighted_vote;
    std::vector<double> w(n, 1.0 / double(n));

    std::size_t round = 0, attempt = 0, discards = 0;
    while (round < rounds && discards < kMaxConsecutiveDiscards) {
        SplitMix64 rng(derive_seed(seed, "adaboost", {round, attempt}));
        const auto idx = weighted_resample(w, n, rng);
        const LabeledDataset sample = data.subset(idx);
        if (sample.classes_present() < 2) {
            ++discards;
            ++attempt;
            continue;
        }
        Member m = train_member(sample, derive_seed(seed, "adaboost-member", {round, attempt}));
        std::vector<bool> wrong(n);
        double eps = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wrong[i] = m.predict(data.row(i)).label != data.label(i);
            if (wrong[i]) eps += w[i];
        }
        if (eps >= 0.5) {
            ++discards;
            ++attempt;
            continue;
        }
        discards = 0;
        const double alpha = adaboost_alpha(eps);
        ens.members.push_back(std::move(m));
        ens.member_weights.push_back(alpha);
        ens.round_errors.push_back(eps);
        ++round;
        attempt = 0;
        if (eps == 0.0) break;

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += w[i] *= std::exp(wrong[i] ? alpha : -alpha);
        for (double& wi : w) wi /= total;
        if (on_round) on_round(w);
    }
    if (ens.members.empty()) {
        Member m = train_member(data, derive_seed(seed, "adaboost-fallback"));
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < n; ++i) wrong += m.predict(data.row(i)).label != data.label(i);
        ens.members.push_back(std::move(m));
        ens.member_weights.push_back(1.0);
        ens.round_errors.push_back(double(wrong) / double(n));
        ens.fallback = true;
    }
    return ens;
}

inline Ensemble<TrainedModel> adaboost(const LearnerConfig& base, std::size_t rounds,
                                       const LabeledDataset& data, std::uint64_t seed,
                                       const RoundObserver& on_round = {}) {
    return adaboost_with([&](const LabeledDataset& d, std::uint64_t s) { return train(base, d, s); },
                         rounds, data, seed, on_round);
}

/// Boosting over inverted base models (the "invert, then boost" order).
inline Ensemble<InvertedModel<TrainedModel>> adaboost_inverted_base(const LearnerConfig& base,
                                                                    std::size_t rounds,
                                                                    const LabeledDataset& data,
                                                                    std::uint64_t seed) {
    return adaboost_with(
        [&](const LabeledDataset& d, std::uint64_t s) { return invert(train(base, d, s)); }, rounds,
        data, seed);
}

/// n-sample bootstrap with replacement.
inline std::vector<std::size_t> bootstrap_indices(std::size_t n, SplitMix64& rng) {
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = rng.below(n);
    return idx;
}

/// Bagging: each member trains on its own bootstrap (sub-seed per bag;
/// single-class draws are redrawn); majority vote with ties to the lowest class.
inline Ensemble<TrainedModel> bagging(const LearnerConfig& base, std::size_t bags,
                                      const LabeledDataset& data, std::uint64_t seed,
                                      std::size_t parallelism = 1) {
    if (bags < 1) throw InputError("bagging: bags must be at least 1");
    std::vector<std::optional<TrainedModel>> slots(bags);
    parallel_for(bags, parallelism, [&](std::size_t b) {
        for (std::size_t attempt = 0;; ++attempt) {
            SplitMix64 rng(derive_seed(seed, "bagging", {b, attempt}));
            const LabeledDataset sample = data.subset(bootstrap_indices(data.size(), rng));
            if (sample.classes_present() < 2) {
                if (attempt >= 100) throw InputError("bagging: bootstrap keeps drawing a single class");
                continue;
            }
            slots[b].emplace(train(base, sample, derive_seed(seed, "bagging-member", {b})));
            return;
        }
    });
    Ensemble<TrainedModel> ens;
    ens.combination = Combination::majority_vote;
    ens.classes = data.n_classes();
    for (auto& s : slots) {
        ens.members.push_back(std::move(*s));
        ens.member_weights.push_back(1.0);
    }
    return ens;
}

// ---------------------------------------------------------------------------
// Exact binomial tails

inline double binomial_log_pmf(std::size_t k, std::size_t n, double p) {
    if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0) +
           double(k) * std::log(p) + double(n - k) * std::log1p(-p);
}

/// P(X <= k) for X ~ Binomial(n, p).
inline double binomial_cdf(std::size_t k, std::size_t n, double p) {
    if (k >= n) return 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i <= k; ++i) s += std::exp(binomial_log_pmf(i, n, p));
    return std::clamp(s, 0.0, 1.0);
}

/// P(X >= k) for X ~ Binomial(n, p).
inline double binomial_sf(std::size_t k, std::size_t n, double p) {
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    double s = 0.0;
    for (std::size_t i = k; i <= n; ++i) s += std::exp(binomial_log_pmf(i, n, p));
    return std::clamp(s, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Anti-learning detector

enum class VerdictKind { learning, anti_learning, indistinguishable };

inline std::string to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::learning: return "learning";
        case VerdictKind::anti_learning: return "anti_learning";
        case VerdictKind::indistinguishable: return "indistinguishable";
    }
    return "indistinguishable";
}

struct AntiLearningVerdict {
    double mean_test_accuracy = 0.0;
    /// Pooled out-of-fold predictions (repeats x samples).
    std::size_t n_predictions = 0;
    std::size_t n_correct = 0;
    /// Sample size the binomial tests were run at (informational for the
    /// permutation rule: chance (1 - chance) / null variance).
    std::size_t effective_n = 0;
    /// Accuracy expected without signal. For the permutation rule this is the
    /// mean accuracy of the same protocol on label-permuted copies.
    double chance_level = 0.5;
    /// Permutation rule only: label permutations run and the spread of their
    /// pooled accuracies.
    std::size_t permutations = 0;
    double null_accuracy_sd = 0.0;
    double p_value_below_chance = 1.0;
    double p_value_above_chance = 1.0;
    VerdictKind verdict = VerdictKind::indistinguishable;
};

inline VerdictKind decide(double p_below, double p_above, double alpha) {
    if (p_below < alpha) return VerdictKind::anti_learning;
    if (p_above < alpha) return VerdictKind::learning;
    return VerdictKind::indistinguishable;
}

/// Apply the decision rule to a correct-count out of `total` trials.
inline AntiLearningVerdict judge(std::size_t correct, std::size_t total, double chance, double alpha) {
    AntiLearningVerdict v;
    v.n_predictions = total;
    v.n_correct = correct;
    v.effective_n = total;
    v.chance_level = chance;
    v.mean_test_accuracy = total == 0 ? 0.0 : double(correct) / double(total);
    v.p_value_below_chance = binomial_cdf(correct, total, chance);
    v.p_value_above_chance = binomial_sf(correct, total, chance);
    v.verdict = decide(v.p_value_below_chance, v.p_value_above_chance, alpha);
    return v;
}

/// How pooled out-of-fold predictions are turned into a verdict.
///
/// permutation: the whole protocol (same repeats and folds) is rerun on
/// label-permuted copies of the data. Their pooled accuracies give the null
/// mean and spread, which absorb both the slight below-chance bias of
/// cross-validation on signal-free labels and the correlation between
/// out-of-fold errors. The observed accuracy is compared with a Student-t
/// prediction interval, t = (acc - mean) / (sd * sqrt(1 + 1/B)) on B - 1
/// degrees of freedom. Costs B + 1 times the training of the other rules.
///
/// clustered_binomial: chance is sum_c prior(c) * predicted(c) and the exact
/// binomial test runs at n_eff = N * chance * (1 - chance) / var_i(correct
/// fraction of sample i), clamped to [N, repeats * N]. Cheap, but it ignores
/// correlation between samples and the cross-validation bias, so on random
/// labels it flags anti-learning at about twice alpha.
///
/// pooled_majority: every pooled prediction counts as an independent trial
/// against the majority-class prior. Far too eager on random labels, kept
/// for comparison.
enum class DetectorRule { permutation, clustered_binomial, pooled_majority };

inline DetectorRule parse_detector_rule(const std::string& s) {
    if (s == "permutation") return DetectorRule::permutation;
    if (s == "clustered_binomial") return DetectorRule::clustered_binomial;
    if (s == "pooled_majority") return DetectorRule::pooled_majority;
    throw InputError("unknown detector rule '" + s +
                     "' (expected permutation, clustered_binomial or pooled_majority)");
}

inline std::string to_string(DetectorRule r) {
    switch (r) {
        case DetectorRule::permutation: return "permutation";
        case DetectorRule::clustered_binomial: return "clustered_binomial";
        case DetectorRule::pooled_majority: return "pooled_majority";
    }
    return "permutation";
}

inline constexpr std::size_t kDefaultPermutations = 19;

namespace detail {

inline std::size_t count_correct(const LabeledDataset& ld, const std::vector<std::vector<std::size_t>>& predictions) {
    std::size_t correct = 0;
    for (const auto& rep : predictions)
        for (std::size_t i = 0; i < ld.size(); ++i) correct += rep[i] == ld.label(i);
    return correct;
}

}  // namespace detail

/// Binomial verdict from out-of-fold predictions: predictions[r][i] is the
/// class predicted for sample i in repeat r.
inline AntiLearningVerdict judge_predictions(const LabeledDataset& ld,
                                             const std::vector<std::vector<std::size_t>>& predictions,
                                             double alpha, DetectorRule rule) {
    if (rule == DetectorRule::permutation)
        throw InputError("judge_predictions: the permutation rule needs the null runs; use detect_antilearning");
    const std::size_t N = ld.size(), R = predictions.size();
    std::vector<double> frac(N, 0.0);
    std::size_t correct = 0, predicted_one = 0;
    for (const auto& rep : predictions)
        for (std::size_t i = 0; i < N; ++i) {
            const bool ok = rep[i] == ld.label(i);
            correct += ok;
            predicted_one += rep[i] == 1;
            frac[i] += ok ? 1.0 : 0.0;
        }
    const std::size_t total = R * N;
    const auto counts = ld.class_counts();
    if (rule == DetectorRule::pooled_majority) {
        const double chance = double(*std::max_element(counts.begin(), counts.end())) / double(N);
        return judge(correct, total, chance, alpha);
    }

    const double p1 = double(counts[1]) / double(N);
    const double q1 = double(predicted_one) / double(total);
    const double chance = p1 * q1 + (1.0 - p1) * (1.0 - q1);
    const double mean = double(correct) / double(total);
    double var = 0.0;
    for (double& f : frac) {
        f /= double(R);
        var += (f - mean) * (f - mean);
    }
    var = N > 1 ? var / double(N - 1) : 0.0;
    double n_eff = var > 0.0 ? double(N) * chance * (1.0 - chance) / var : double(total);
    n_eff = std::clamp(n_eff, double(N), double(total));
    const auto n = static_cast<std::size_t>(std::lround(n_eff));
    const auto k = static_cast<std::size_t>(std::lround(mean * double(n)));
    AntiLearningVerdict v = judge(k, n, chance, alpha);
    v.mean_test_accuracy = mean;
    v.n_predictions = total;
    v.n_correct = correct;
    v.effective_n = n;
    return v;
}

/// Verdict from an observed pooled accuracy and the pooled accuracies of the
/// same protocol on B label permutations (see DetectorRule::permutation).
inline AntiLearningVerdict judge_against_null(double observed, std::span<const double> null_accuracies,
                                              double alpha) {
    const std::size_t B = null_accuracies.size();
    if (B < 2) throw InputError("permutation test needs at least 2 permutations");
    double mean = 0.0;
    for (double a : null_accuracies) mean += a;
    mean /= double(B);
    double var = 0.0;
    for (double a : null_accuracies) var += (a - mean) * (a - mean);
    var /= double(B - 1);

    AntiLearningVerdict v;
    v.mean_test_accuracy = observed;
    v.chance_level = mean;
    v.permutations = B;
    v.null_accuracy_sd = std::sqrt(var);
    if (var > 0.0) {
        const boost::math::students_t dist(double(B - 1));
        const double t = (observed - mean) / (v.null_accuracy_sd * std::sqrt(1.0 + 1.0 / double(B)));
        v.p_value_below_chance = boost::math::cdf(dist, t);
        v.p_value_above_chance = boost::math::cdf(boost::math::complement(dist, t));
        v.effective_n = static_cast<std::size_t>(std::lround(std::clamp(mean * (1.0 - mean) / var, 1.0, 1e12)));
    } else {
        // Every permutation scored the same: fall back to rank p-values.
        const auto below = std::count_if(null_accuracies.begin(), null_accuracies.end(),
                                         [&](double a) { return a <= observed; });
        const auto above = std::count_if(null_accuracies.begin(), null_accuracies.end(),
                                         [&](double a) { return a >= observed; });
        v.p_value_below_chance = double(1 + below) / double(B + 1);
        v.p_value_above_chance = double(1 + above) / double(B + 1);
    }
    v.verdict = decide(v.p_value_below_chance, v.p_value_above_chance, alpha);
    return v;
}

/// `repeats` stratified k-fold cross-validations (sub-seed per repeat) whose
/// out-of-fold predictions are pooled and judged by `rule`. The permutation
/// rule additionally runs the same protocol on `permutations` label-shuffled
/// copies; the observed run is identical under every rule.
inline AntiLearningVerdict detect_antilearning(const LabeledDataset& ld, const LearnerConfig& base,
                                               std::size_t repeats, std::size_t k, double alpha,
                                               std::uint64_t seed, std::size_t parallelism = 1,
                                               DetectorRule rule = DetectorRule::permutation,
                                               std::size_t permutations = kDefaultPermutations) {
    if (ld.n_classes() != 2) throw InputError("detect_antilearning: labels must be binary");
    if (repeats < 1) throw InputError("detect_antilearning: repeats must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("detect_antilearning: alpha must lie in (0, 1)");
    if (rule == DetectorRule::permutation && permutations < 2)
        throw InputError("detect_antilearning: the permutation rule needs at least 2 permutations");

    // Run 0 is the data as given; runs 1..B carry permuted labels.
    const std::size_t runs = rule == DetectorRule::permutation ? 1 + permutations : 1;
    std::vector<LabeledDataset> datasets{ld};
    std::vector<std::uint64_t> seeds{seed};
    for (std::size_t b = 1; b < runs; ++b) {
        std::vector<std::size_t> labels(ld.labels().begin(), ld.labels().end());
        SplitMix64 rng(derive_seed(seed, "detect-permutation", {b}));
        shuffle(labels, rng);
        datasets.emplace_back(ld.features(), std::move(labels), ld.class_names());
        seeds.push_back(derive_seed(seed, "detect-null", {b}));
    }

    std::vector<std::vector<CVPlan>> plans(runs);
    for (std::size_t b = 0; b < runs; ++b)
        for (std::size_t r = 0; r < repeats; ++r)
            plans[b].push_back(split_kfold(datasets[b], k, derive_seed(seeds[b], "detect-plan", {r}), true));

    // Folds of one repeat write disjoint entries of predictions[b][r].
    std::vector<std::vector<std::vector<std::size_t>>> predictions(
        runs, std::vector<std::vector<std::size_t>>(repeats, std::vector<std::size_t>(ld.size(), 0)));
    parallel_for(runs * repeats * k, parallelism, [&](std::size_t cell) {
        const std::size_t b = cell / (repeats * k), r = (cell / k) % repeats, f = cell % k;
        const Split s = plans[b][r].split(f);
        const auto model = train(base, datasets[b].subset(s.train), derive_seed(seeds[b], "detect-train", {r, f}));
        for (std::size_t i : s.test) predictions[b][r][i] = model.predict(ld.row(i)).label;
    });
    if (rule != DetectorRule::permutation) return judge_predictions(ld, predictions[0], alpha, rule);

    const double total = double(repeats * ld.size());
    std::vector<double> null_accuracies;
    for (std::size_t b = 1; b < runs; ++b)
        null_accuracies.push_back(double(detail::count_correct(datasets[b], predictions[b])) / total);
    const std::size_t correct = detail::count_correct(ld, predictions[0]);
    AntiLearningVerdict v = judge_against_null(double(correct) / total, null_accuracies, alpha);
    v.n_predictions = repeats * ld.size();
    v.n_correct = correct;
    return v;
}

}  // namespace antilearn
