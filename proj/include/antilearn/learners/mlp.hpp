#pragma once

// Single-hidden-layer perceptron: logistic hidden units, linear outputs,
// trained on mean squared error by back-propagation.
//
// Loss over a batch of n samples with targets t:
//     L = 1/(2n) * sum_i sum_o (y_io - t_io)^2
//
// Flattened parameter order (used by gradient() and parameters()):
//     W1[h][d]  (hidden x inputs, row-major)
//     b1[h]
//     W2[o][h]  (outputs x hidden, row-major)
//     b2[o]

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/learners/common.hpp"
#include "antilearn/rng.hpp"

namespace antilearn {

enum class OutputMode { graded, binary, one_per_class };

struct MlpConfig {
    std::size_t hidden_units = 5;
    double learning_rate = 0.01;
    std::size_t epochs = 2000;
    OutputMode output_mode = OutputMode::graded;
    /// 0 trains full-batch; otherwise shuffled mini-batches of this size
    /// (1 is per-sample online back-propagation).
    std::size_t batch_size = 0;
    /// Input-to-hidden weights and biases start uniform in +-init_scale.
    /// Hidden-to-output parameters always start uniform in +-0.5.
    double init_scale = 0.5;
};

/// Target value of class c under graded encoding with C classes:
/// (c + 1) / (C + 1), i.e. 0.2, 0.4, 0.6, 0.8 for four stages.
inline double graded_target(std::size_t c, std::size_t n_classes) {
    return double(c + 1) / double(n_classes + 1);
}

/// Nearest graded target; scores exactly halfway between two targets go to
/// the lower class. Out-of-range scores fall to the end classes.
inline std::size_t decode_graded(double score, std::size_t n_classes = 4) {
    std::size_t cls = 0;
    for (std::size_t c = 0; c + 1 < n_classes; ++c)
        if (score > double(2 * c + 3) / double(2 * (n_classes + 1))) cls = c + 1;
    return cls;
}

class MlpModel {
public:
    MlpModel() = default;

    MlpModel(std::size_t inputs, std::size_t hidden, std::size_t n_classes, OutputMode mode)
        : inputs_(inputs), hidden_(hidden), classes_(n_classes), mode_(mode) {
        if (mode == OutputMode::binary && n_classes != 2)
            throw InputError("mlp: binary output mode requires exactly two classes");
        outputs_ = mode == OutputMode::one_per_class ? n_classes : 1;
        params_.assign(parameter_count(), 0.0);
    }

    std::size_t inputs() const noexcept { return inputs_; }
    std::size_t hidden_units() const noexcept { return hidden_; }
    std::size_t outputs() const noexcept { return outputs_; }
    std::size_t n_classes() const noexcept { return classes_; }
    OutputMode output_mode() const noexcept { return mode_; }

    std::size_t parameter_count() const noexcept {
        return hidden_ * inputs_ + hidden_ + outputs_ * hidden_ + outputs_;
    }
    std::span<const double> parameters() const noexcept { return params_; }
    std::span<double> parameters() noexcept { return params_; }

    void initialize(std::uint64_t seed, double init_scale) {
        SplitMix64 rng(seed);
        const std::size_t hidden_block = hidden_ * inputs_ + hidden_;
        for (std::size_t i = 0; i < params_.size(); ++i) {
            const double s = i < hidden_block ? init_scale : 0.5;
            params_[i] = rng.uniform(-s, s);
        }
    }

    /// Regression targets for class y under the model's output encoding.
    void targets(std::size_t y, std::span<double> t) const {
        switch (mode_) {
            case OutputMode::graded: t[0] = graded_target(y, classes_); break;
            case OutputMode::binary: t[0] = y == 1 ? 1.0 : 0.0; break;
            case OutputMode::one_per_class:
                for (std::size_t o = 0; o < outputs_; ++o) t[o] = o == y ? 1.0 : 0.0;
                break;
        }
    }

    void forward(std::span<const double> x, std::span<double> hidden, std::span<double> out) const {
        const double* w1 = params_.data();
        const double* b1 = w1 + hidden_ * inputs_;
        const double* w2 = b1 + hidden_;
        const double* b2 = w2 + outputs_ * hidden_;
        for (std::size_t h = 0; h < hidden_; ++h) {
            double a = b1[h];
            const double* w = w1 + h * inputs_;
            for (std::size_t d = 0; d < inputs_; ++d) a += w[d] * x[d];
            hidden[h] = 1.0 / (1.0 + std::exp(-a));
        }
        for (std::size_t o = 0; o < outputs_; ++o) {
            double a = b2[o];
            const double* w = w2 + o * hidden_;
            for (std::size_t h = 0; h < hidden_; ++h) a += w[h] * hidden[h];
            out[o] = a;
        }
    }

    std::vector<double> outputs_for(std::span<const double> x) const {
        std::vector<double> hidden(hidden_), out(outputs_);
        forward(x, hidden, out);
        return out;
    }

    std::size_t decode(std::span<const double> out) const {
        switch (mode_) {
            case OutputMode::graded: return decode_graded(out[0], classes_);
            case OutputMode::binary: return out[0] > 0.5 ? 1 : 0;
            case OutputMode::one_per_class: return argmax_low(out);
        }
        return 0;
    }

    Prediction predict(std::span<const double> x) const {
        auto out = outputs_for(x);
        const std::size_t label = decode(out);
        return {label, std::move(out)};
    }

    /// Accumulate the squared-error gradient of one sample into `grad`
    /// (unscaled: d/dθ of 1/2 * sum_o (y_o - t_o)^2). Returns that sample loss.
    double accumulate_sample(std::span<const double> x, std::size_t y, std::span<double> grad,
                             std::span<double> hidden, std::span<double> out,
                             std::span<double> target) const {
        forward(x, hidden, out);
        targets(y, target);
        const double* w2 = params_.data() + hidden_ * inputs_ + hidden_;
        double* g_w1 = grad.data();
        double* g_b1 = g_w1 + hidden_ * inputs_;
        double* g_w2 = g_b1 + hidden_;
        double* g_b2 = g_w2 + outputs_ * hidden_;
        double loss = 0.0;
        for (std::size_t o = 0; o < outputs_; ++o) {
            const double e = out[o] - target[o];
            loss += 0.5 * e * e;
            out[o] = e;  // reuse as output delta
            g_b2[o] += e;
            for (std::size_t h = 0; h < hidden_; ++h) g_w2[o * hidden_ + h] += e * hidden[h];
        }
        for (std::size_t h = 0; h < hidden_; ++h) {
            double back = 0.0;
            for (std::size_t o = 0; o < outputs_; ++o) back += out[o] * w2[o * hidden_ + h];
            const double delta = back * hidden[h] * (1.0 - hidden[h]);
            g_b1[h] += delta;
            double* g = g_w1 + h * inputs_;
            for (std::size_t d = 0; d < inputs_; ++d) g[d] += delta * x[d];
        }
        return loss;
    }

    /// Mean loss over the given rows of `data` (all rows when `rows` is empty).
    double loss(const LabeledDataset& data, std::span<const std::size_t> rows = {}) const {
        std::vector<double> hidden(hidden_), out(outputs_), target(outputs_);
        const std::size_t n = rows.empty() ? data.size() : rows.size();
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = rows.empty() ? k : rows[k];
            forward(data.row(i), hidden, out);
            targets(data.label(i), target);
            for (std::size_t o = 0; o < outputs_; ++o) {
                const double e = out[o] - target[o];
                total += 0.5 * e * e;
            }
        }
        return total / double(n);
    }

private:
    std::size_t inputs_ = 0;
    std::size_t hidden_ = 0;
    std::size_t outputs_ = 1;
    std::size_t classes_ = 2;
    OutputMode mode_ = OutputMode::graded;
    std::vector<double> params_;
};

/// Gradient of the mean loss over `batch` with respect to every parameter,
/// in the flattened order documented at the top of this header.
inline std::vector<double> mlp_gradient(const MlpModel& m, const LabeledDataset& batch) {
    if (batch.size() == 0) throw InputError("mlp_gradient: empty batch");
    std::vector<double> grad(m.parameter_count(), 0.0);
    std::vector<double> hidden(m.hidden_units()), out(m.outputs()), target(m.outputs());
    for (std::size_t i = 0; i < batch.size(); ++i)
        m.accumulate_sample(batch.row(i), batch.label(i), grad, hidden, out, target);
    const double inv = 1.0 / double(batch.size());
    for (double& g : grad) g *= inv;
    return grad;
}

struct MlpTrainingInfo {
    std::size_t epochs_run = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// Gradient descent on the mean squared error. Throws NumericalError as soon
/// as the loss stops being finite.
inline MlpModel train_mlp(const MlpConfig& cfg, const LabeledDataset& data, std::uint64_t seed,
                          MlpTrainingInfo* info = nullptr) {
    MlpModel m(data.features().cols(), cfg.hidden_units, data.n_classes(), cfg.output_mode);
    m.initialize(derive_seed(seed, "mlp-init"), cfg.init_scale);
    SplitMix64 order_rng(derive_seed(seed, "mlp-order"));

    const std::size_t n = data.size();
    const std::size_t batch = cfg.batch_size == 0 || cfg.batch_size >= n ? n : cfg.batch_size;
    std::vector<double> grad(m.parameter_count());
    std::vector<double> hidden(m.hidden_units()), out(m.outputs()), target(m.outputs());
    auto order = iota_indices(n);
    const double initial = m.loss(data);
    if (!std::isfinite(initial)) throw NumericalError("mlp: initial loss is not finite");

    auto params = m.parameters();
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (batch < n) shuffle(order, order_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k)
                epoch_loss += m.accumulate_sample(data.row(order[k]), data.label(order[k]), grad,
                                                  hidden, out, target);
            const double step = cfg.learning_rate / double(end - start);
            for (std::size_t p = 0; p < params.size(); ++p) params[p] -= step * grad[p];
        }
        if (!std::isfinite(epoch_loss))
            throw NumericalError("mlp: training loss became non-finite at epoch " +
                                 std::to_string(epoch + 1));
    }
    if (info) {
        info->epochs_run = cfg.epochs;
        info->initial_loss = initial;
        info->final_loss = m.loss(data);
    }
    return m;
}

}  // namespace antilearn
