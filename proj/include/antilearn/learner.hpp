#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/learners/cart.hpp"
#include "antilearn/learners/common.hpp"
#include "antilearn/learners/knn.hpp"
#include "antilearn/learners/lssvm.hpp"
#include "antilearn/learners/mlp.hpp"
#include "antilearn/learners/naive_bayes.hpp"

namespace antilearn {

enum class Algorithm { mlp, cart, naive_bayes, lssvm, knn };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::mlp: return "mlp";
        case Algorithm::cart: return "cart";
        case Algorithm::naive_bayes: return "naive_bayes";
        case Algorithm::lssvm: return "lssvm";
        case Algorithm::knn: return "knn";
    }
    return "mlp";
}

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "mlp" || s == "ann") return Algorithm::mlp;
    if (s == "cart") return Algorithm::cart;
    if (s == "naive_bayes" || s == "nb") return Algorithm::naive_bayes;
    if (s == "lssvm" || s == "svm") return Algorithm::lssvm;
    if (s == "knn" || s == "1nn") return Algorithm::knn;
    throw InputError("unknown algorithm '" + s + "'");
}

inline OutputMode parse_output_mode(const std::string& s) {
    if (s == "graded") return OutputMode::graded;
    if (s == "binary") return OutputMode::binary;
    if (s == "one_per_class") return OutputMode::one_per_class;
    throw InputError("unknown mlp output mode '" + s + "'");
}

inline std::string to_string(OutputMode m) {
    switch (m) {
        case OutputMode::graded: return "graded";
        case OutputMode::binary: return "binary";
        case OutputMode::one_per_class: return "one_per_class";
    }
    return "graded";
}

struct LearnerConfig {
    Algorithm algorithm = Algorithm::mlp;
    MlpConfig mlp;
    CartConfig cart;
    NaiveBayesConfig nb;
    LsSvmConfig lssvm;
    KnnConfig knn;

    static LearnerConfig of(Algorithm a) {
        LearnerConfig c;
        c.algorithm = a;
        return c;
    }

    /// Throws InputError unless every numeric hyperparameter is strictly positive.
    void validate() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw InputError(std::string("learner config: ") + what + " must be positive");
        };
        require(mlp.hidden_units > 0, "mlp.hidden_units");
        require(mlp.learning_rate > 0.0, "mlp.learning_rate");
        require(mlp.epochs > 0, "mlp.epochs");
        require(mlp.init_scale > 0.0, "mlp.init_scale");
        require(cart.max_depth > 0, "cart.max_depth");
        require(cart.min_leaf > 0, "cart.min_leaf");
        require(nb.laplace_alpha > 0.0, "nb.laplace_alpha");
        require(lssvm.gamma > 0.0, "lssvm.gamma");
        require(lssvm.rbf_sigma > 0.0, "lssvm.rbf_sigma");
        require(knn.k > 0, "knn.k");
    }

    /// Apply one `name=value` hyperparameter override, e.g. "mlp.hidden_units=24".
    void set(const std::string& key, const std::string& value) {
        try {
            if (key == "mlp.hidden_units") mlp.hidden_units = std::stoul(value);
            else if (key == "mlp.learning_rate") mlp.learning_rate = std::stod(value);
            else if (key == "mlp.epochs") mlp.epochs = std::stoul(value);
            else if (key == "mlp.output_mode") mlp.output_mode = parse_output_mode(value);
            else if (key == "mlp.batch_size") mlp.batch_size = std::stoul(value);
            else if (key == "mlp.init_scale") mlp.init_scale = std::stod(value);
            else if (key == "cart.max_depth") cart.max_depth = std::stoul(value);
            else if (key == "cart.min_leaf") cart.min_leaf = std::stoul(value);
            else if (key == "nb.laplace_alpha") nb.laplace_alpha = std::stod(value);
            else if (key == "lssvm.gamma") lssvm.gamma = std::stod(value);
            else if (key == "lssvm.kernel")
                lssvm.kernel = value == "rbf" ? KernelKind::rbf
                               : value == "linear" ? KernelKind::linear
                                                   : throw InputError("unknown kernel '" + value + "'");
            else if (key == "lssvm.rbf_sigma") lssvm.rbf_sigma = std::stod(value);
            else if (key == "knn.k") knn.k = std::stoul(value);
            else throw InputError("unknown hyperparameter '" + key + "'");
        } catch (const std::logic_error&) {
            throw InputError("bad value '" + value + "' for hyperparameter '" + key + "'");
        }
    }

    /// Short description of the hyperparameters that matter for `algorithm`.
    std::string describe() const {
        switch (algorithm) {
            case Algorithm::mlp:
                return "mlp hidden_units=" + std::to_string(mlp.hidden_units) +
                       " learning_rate=" + format_number(mlp.learning_rate) +
                       " epochs=" + std::to_string(mlp.epochs) + " output_mode=" + to_string(mlp.output_mode) +
                       " batch_size=" + std::to_string(mlp.batch_size) +
                       " init_scale=" + format_number(mlp.init_scale);
            case Algorithm::cart:
                return "cart max_depth=" + std::to_string(cart.max_depth) +
                       " min_leaf=" + std::to_string(cart.min_leaf);
            case Algorithm::naive_bayes: return "naive_bayes laplace_alpha=" + format_number(nb.laplace_alpha);
            case Algorithm::lssvm:
                return std::string("lssvm gamma=") + format_number(lssvm.gamma) +
                       " kernel=" + (lssvm.kernel == KernelKind::linear ? "linear" : "rbf") +
                       " rbf_sigma=" + format_number(lssvm.rbf_sigma);
            case Algorithm::knn: return "knn k=" + std::to_string(knn.k);
        }
        return {};
    }
};

struct TrainingInfo {
    std::size_t epochs_run = 0;
    std::optional<double> initial_loss;
    std::optional<double> final_loss;
};

/// Result of train(): one fitted learner behind a uniform predict().
class TrainedModel {
public:
    using Params = std::variant<MlpModel, CartModel, NaiveBayesModel, LsSvmModel, KnnModel>;

    TrainedModel(LearnerConfig config, Params params, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names, TrainingInfo info)
        : config_(std::move(config)),
          params_(std::move(params)),
          feature_names_(std::move(feature_names)),
          class_names_(std::move(class_names)),
          info_(info) {}

    Algorithm algorithm() const noexcept { return config_.algorithm; }
    const LearnerConfig& config() const noexcept { return config_; }
    const Params& params() const noexcept { return params_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    std::size_t n_classes() const noexcept { return class_names_.size(); }
    std::size_t feature_count() const noexcept { return feature_names_.size(); }
    const TrainingInfo& info() const noexcept { return info_; }

    template <class T>
    const T& as() const {
        return std::get<T>(params_);
    }

    Prediction predict(std::span<const double> x) const {
        if (x.size() != feature_count())
            throw InputError("predict: feature vector has " + std::to_string(x.size()) +
                             " values, model expects " + std::to_string(feature_count()));
        return std::visit([&](const auto& m) { return m.predict(x); }, params_);
    }

    void dump(std::ostream& os) const {
        os << "algorithm " << to_string(config_.algorithm) << '\n';
        os << "hyperparameters " << config_.describe() << '\n';
        os << "classes";
        for (const auto& c : class_names_) os << ' ' << c;
        os << "\nfeatures " << feature_count() << '\n';
        std::visit(
            [&](const auto& m) {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, MlpModel>) {
                    os << "parameters (W1, b1, W2, b2)";
                    for (double p : m.parameters()) os << ' ' << format_number(p);
                    os << '\n';
                } else if constexpr (std::is_same_v<M, CartModel>) {
                    m.dump(os, feature_names_, class_names_);
                } else if constexpr (std::is_same_v<M, NaiveBayesModel>) {
                    m.dump(os, feature_names_, class_names_);
                } else if constexpr (std::is_same_v<M, LsSvmModel>) {
                    m.dump(os);
                } else {
                    os << "stored points " << m.size() << " k " << m.k() << '\n';
                }
            },
            params_);
    }

private:
    LearnerConfig config_;
    Params params_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;
    TrainingInfo info_;
};

/// Fit `config.algorithm` on `data`. The result is a deterministic function
/// of (config, data, seed); only the MLP consumes the seed.
inline TrainedModel train(const LearnerConfig& config, const LabeledDataset& data, std::uint64_t seed) {
    config.validate();
    if (data.size() == 0) throw InputError("train: empty training set");
    if (data.classes_present() < 2) throw InputError("train: training set holds a single class");
    if (data.features().has_missing()) throw InputError("train: impute missing values first");

    TrainingInfo info;
    TrainedModel::Params params = [&]() -> TrainedModel::Params {
        switch (config.algorithm) {
            case Algorithm::mlp: {
                MlpTrainingInfo mi;
                auto m = train_mlp(config.mlp, data, seed, &mi);
                info.epochs_run = mi.epochs_run;
                info.initial_loss = mi.initial_loss;
                info.final_loss = mi.final_loss;
                return m;
            }
            case Algorithm::cart: return CartModel::fit(config.cart, data);
            case Algorithm::naive_bayes: return NaiveBayesModel::fit(config.nb, data);
            case Algorithm::lssvm: return LsSvmModel::fit(config.lssvm, data);
            case Algorithm::knn: return KnnModel::fit(config.knn, data);
        }
        throw InputError("train: unknown algorithm");
    }();
    return TrainedModel(config, std::move(params), data.features().attribute_names(), data.class_names(), info);
}

inline Prediction predict(const TrainedModel& m, std::span<const double> x) { return m.predict(x); }

/// Number of rows of `data` the model classifies correctly.
template <class Model>
std::size_t correct_count(const Model& m, const LabeledDataset& data) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (m.predict(data.row(i)).label == data.label(i)) ++ok;
    return ok;
}

template <class Model>
double accuracy(const Model& m, const LabeledDataset& data) {
    return data.size() == 0 ? 0.0 : double(correct_count(m, data)) / double(data.size());
}

}  // namespace antilearn
