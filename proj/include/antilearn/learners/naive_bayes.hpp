#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/learners/common.hpp"

namespace antilearn {

struct NaiveBayesConfig {
    double laplace_alpha = 1.0;
};

/// Naive Bayes with Gaussian likelihoods for continuous attributes and
/// Laplace-smoothed frequency tables for binary and categorical ones.
/// Priors are the empirical class frequencies.
class NaiveBayesModel {
public:
    NaiveBayesModel() = default;

    static NaiveBayesModel fit(const NaiveBayesConfig& cfg, const LabeledDataset& data) {
        const Dataset& X = data.features();
        NaiveBayesModel m;
        m.classes_ = data.n_classes();
        m.kinds_ = X.attribute_kinds();
        const auto counts = data.class_counts();
        m.log_prior_.resize(m.classes_);
        for (std::size_t c = 0; c < m.classes_; ++c)
            m.log_prior_[c] = counts[c] == 0 ? -std::numeric_limits<double>::infinity()
                                             : std::log(double(counts[c]) / double(data.size()));

        // Variance floor relative to the widest attribute, so a feature that
        // is constant within a class does not produce an infinite density.
        double widest = 0.0;
        for (std::size_t f = 0; f < X.cols(); ++f) {
            if (m.kinds_[f] != AttributeKind::continuous) continue;
            double mean = 0.0, sq = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) mean += X.value(i, f);
            mean /= double(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) sq += (X.value(i, f) - mean) * (X.value(i, f) - mean);
            widest = std::max(widest, sq / double(data.size()));
        }
        const double var_floor = 1e-9 * std::max(widest, 1.0);

        m.features_.resize(X.cols());
        for (std::size_t f = 0; f < X.cols(); ++f) {
            auto& fs = m.features_[f];
            fs.per_class.resize(m.classes_);
            if (m.kinds_[f] == AttributeKind::continuous) {
                for (std::size_t c = 0; c < m.classes_; ++c) {
                    double mean = 0.0, sq = 0.0;
                    std::size_t n = 0;
                    for (std::size_t i = 0; i < data.size(); ++i)
                        if (data.label(i) == c) {
                            mean += X.value(i, f);
                            ++n;
                        }
                    if (n == 0) continue;
                    mean /= double(n);
                    for (std::size_t i = 0; i < data.size(); ++i)
                        if (data.label(i) == c) sq += (X.value(i, f) - mean) * (X.value(i, f) - mean);
                    fs.per_class[c].mean = mean;
                    fs.per_class[c].var = sq / double(n) + var_floor;
                }
                continue;
            }
            std::size_t levels = m.kinds_[f] == AttributeKind::binary ? 2 : X.levels(f).size();
            for (std::size_t i = 0; i < data.size(); ++i)
                levels = std::max(levels, static_cast<std::size_t>(X.value(i, f)) + 1);
            fs.levels = levels;
            for (std::size_t c = 0; c < m.classes_; ++c) {
                std::vector<double> tally(levels, 0.0);
                for (std::size_t i = 0; i < data.size(); ++i)
                    if (data.label(i) == c) tally[static_cast<std::size_t>(X.value(i, f))] += 1.0;
                const double denom = double(counts[c]) + cfg.laplace_alpha * double(levels);
                fs.per_class[c].log_prob.resize(levels);
                for (std::size_t v = 0; v < levels; ++v)
                    fs.per_class[c].log_prob[v] = std::log((tally[v] + cfg.laplace_alpha) / denom);
                fs.per_class[c].log_unseen = std::log(cfg.laplace_alpha / denom);
            }
        }
        return m;
    }

    /// Posterior class probabilities; they sum to one.
    std::vector<double> posterior(std::span<const double> x) const {
        std::vector<double> logp = log_prior_;
        for (std::size_t f = 0; f < features_.size(); ++f) {
            const auto& fs = features_[f];
            for (std::size_t c = 0; c < classes_; ++c) {
                if (std::isinf(logp[c])) continue;
                const auto& st = fs.per_class[c];
                if (kinds_[f] == AttributeKind::continuous) {
                    const double z = x[f] - st.mean;
                    logp[c] += -0.5 * std::log(2.0 * std::numbers::pi * st.var) - z * z / (2.0 * st.var);
                } else {
                    const double v = x[f];
                    const bool known = v >= 0.0 && v < double(st.log_prob.size()) && v == std::floor(v);
                    logp[c] += known ? st.log_prob[static_cast<std::size_t>(v)] : st.log_unseen;
                }
            }
        }
        const double top = *std::max_element(logp.begin(), logp.end());
        double total = 0.0;
        for (double& l : logp) {
            l = std::isinf(l) ? 0.0 : std::exp(l - top);
            total += l;
        }
        for (double& l : logp) l /= total;
        return logp;
    }

    Prediction predict(std::span<const double> x) const {
        auto post = posterior(x);
        const std::size_t label = argmax_low(post);
        return {label, std::move(post)};
    }

    void dump(std::ostream& os, const std::vector<std::string>& feature_names,
              const std::vector<std::string>& class_names) const {
        for (std::size_t c = 0; c < classes_; ++c)
            os << "prior " << class_names.at(c) << ' ' << format_number(std::exp(log_prior_[c])) << '\n';
        for (std::size_t f = 0; f < features_.size(); ++f) {
            for (std::size_t c = 0; c < classes_; ++c) {
                const auto& st = features_[f].per_class[c];
                os << feature_names.at(f) << " | " << class_names.at(c) << ": ";
                if (kinds_[f] == AttributeKind::continuous) {
                    os << "gaussian mean=" << format_number(st.mean) << " var=" << format_number(st.var);
                } else {
                    os << "table";
                    for (double lp : st.log_prob) os << ' ' << format_number(std::exp(lp));
                }
                os << '\n';
            }
        }
    }

private:
    struct ClassStats {
        double mean = 0.0;
        double var = 1.0;
        std::vector<double> log_prob;
        double log_unseen = 0.0;
    };
    struct FeatureStats {
        std::size_t levels = 0;
        std::vector<ClassStats> per_class;
    };

    std::size_t classes_ = 0;
    std::vector<AttributeKind> kinds_;
    std::vector<double> log_prior_;
    std::vector<FeatureStats> features_;
};

}  // namespace antilearn
