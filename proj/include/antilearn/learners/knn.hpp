#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/learners/common.hpp"

namespace antilearn {

struct KnnConfig {
    std::size_t k = 1;
};

/// k-nearest neighbours under Euclidean distance. Equidistant neighbours are
/// taken in training order; vote ties go to the lowest class index.
class KnnModel {
public:
    KnnModel() = default;

    static KnnModel fit(const KnnConfig& cfg, const LabeledDataset& data) {
        KnnModel m;
        m.k_ = std::min(cfg.k, data.size());
        m.dims_ = data.features().cols();
        m.classes_ = data.n_classes();
        m.points_ = data.features().values();
        m.labels_ = data.labels();
        return m;
    }

    Prediction predict(std::span<const double> x) const {
        const std::size_t n = labels_.size();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* p = points_.data() + i * dims_;
            for (std::size_t j = 0; j < dims_; ++j) s += (x[j] - p[j]) * (x[j] - p[j]);
            dist[i] = {s, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
        std::vector<double> votes(classes_, 0.0);
        for (std::size_t i = 0; i < k_; ++i) votes[labels_[dist[i].second]] += 1.0 / double(k_);
        const std::size_t label = argmax_low(votes);
        return {label, std::move(votes)};
    }

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return labels_.size(); }

private:
    std::size_t k_ = 1;
    std::size_t dims_ = 0;
    std::size_t classes_ = 0;
    std::vector<double> points_;
    std::vector<std::size_t> labels_;
};

}  // namespace antilearn
