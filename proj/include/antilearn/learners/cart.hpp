#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/learners/common.hpp"
#include "antilearn/rng.hpp"

namespace antilearn {

struct CartConfig {
    std::size_t max_depth = 6;
    std::size_t min_leaf = 5;
};

struct CartNode {
    // Internal nodes route x[feature] <= threshold to `left`.
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    bool leaf = true;
    std::size_t depth = 0;
    std::size_t samples = 0;
    std::vector<double> class_fraction;
    std::size_t majority = 0;
};

inline double gini(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double s = 1.0;
    for (std::size_t c : counts) {
        const double p = double(c) / double(total);
        s -= p * p;
    }
    return s;
}

/// Classification tree grown by exhaustive binary splits that minimise the
/// size-weighted Gini impurity of the children. A node becomes a leaf when it
/// is pure, sits at max_depth, or has no split leaving min_leaf samples on
/// both sides. Splits are taken even when they do not lower impurity (XOR's
/// first split cannot), so depth rather than gain bounds growth.
class CartModel {
public:
    CartModel() = default;

    static CartModel fit(const CartConfig& cfg, const LabeledDataset& data) {
        CartModel m;
        m.classes_ = data.n_classes();
        m.features_ = data.features().cols();
        auto rows = iota_indices(data.size());
        m.grow(cfg, data, rows, 0);
        return m;
    }

    Prediction predict(std::span<const double> x) const {
        const CartNode& n = leaf_for(x);
        return {n.majority, n.class_fraction};
    }

    const CartNode& leaf_for(std::span<const double> x) const {
        std::size_t i = 0;
        while (!nodes_[i].leaf) i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
        return nodes_[i];
    }

    const std::vector<CartNode>& nodes() const noexcept { return nodes_; }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& n : nodes_) d = std::max(d, n.depth);
        return d;
    }

    /// Indented rule listing, one line per node.
    void dump(std::ostream& os, const std::vector<std::string>& feature_names,
              const std::vector<std::string>& class_names) const {
        dump_node(os, 0, feature_names, class_names);
    }

private:
    std::size_t grow(const CartConfig& cfg, const LabeledDataset& data,
                     std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t id = nodes_.size();
        nodes_.emplace_back();
        std::vector<std::size_t> counts(classes_, 0);
        for (std::size_t r : rows) ++counts[data.label(r)];
        {
            CartNode& node = nodes_[id];
            node.depth = depth;
            node.samples = rows.size();
            node.class_fraction.resize(classes_);
            for (std::size_t c = 0; c < classes_; ++c)
                node.class_fraction[c] = double(counts[c]) / double(rows.size());
            node.majority = argmax_low(node.class_fraction);
        }
        const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
        if (pure || depth >= cfg.max_depth || rows.size() < 2 * cfg.min_leaf) return id;

        const std::size_t n = rows.size();
        double best_score = std::numeric_limits<double>::infinity();
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        std::vector<std::size_t> sorted = rows;
        std::vector<std::size_t> left(classes_), right(classes_);
        for (std::size_t f = 0; f < features_; ++f) {
            std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return data.row(a)[f] < data.row(b)[f];
            });
            std::fill(left.begin(), left.end(), 0);
            right = counts;
            for (std::size_t pos = 0; pos + 1 < n; ++pos) {
                const std::size_t y = data.label(sorted[pos]);
                ++left[y];
                --right[y];
                const double v = data.row(sorted[pos])[f];
                const double next = data.row(sorted[pos + 1])[f];
                if (v == next) continue;
                const std::size_t nl = pos + 1, nr = n - nl;
                if (nl < cfg.min_leaf || nr < cfg.min_leaf) continue;
                const double score = (double(nl) * gini(left, nl) + double(nr) * gini(right, nr)) / double(n);
                if (score < best_score) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = 0.5 * (v + next);
                }
            }
        }
        if (best_score == std::numeric_limits<double>::infinity()) return id;

        std::vector<std::size_t> lrows, rrows;
        for (std::size_t r : rows)
            (data.row(r)[best_feature] <= best_threshold ? lrows : rrows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();
        const std::size_t l = grow(cfg, data, lrows, depth + 1);
        const std::size_t r = grow(cfg, data, rrows, depth + 1);
        CartNode& node = nodes_[id];
        node.leaf = false;
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    void dump_node(std::ostream& os, std::size_t i, const std::vector<std::string>& fnames,
                   const std::vector<std::string>& cnames) const {
        const CartNode& n = nodes_[i];
        const std::string indent(2 * n.depth, ' ');
        if (n.leaf) {
            os << indent << "-> " << cnames.at(n.majority) << " (n=" << n.samples << ")\n";
            return;
        }
        os << indent << "if " << fnames.at(n.feature) << " <= " << format_number(n.threshold) << ":\n";
        dump_node(os, n.left, fnames, cnames);
        os << indent << "else:\n";
        dump_node(os, n.right, fnames, cnames);
    }

    std::vector<CartNode> nodes_;
    std::size_t classes_ = 0;
    std::size_t features_ = 0;
};

}  // namespace antilearn
