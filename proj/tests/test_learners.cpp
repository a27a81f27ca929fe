#include <gtest/gtest.h>

#include <cmath>

#include "antilearn/learner.hpp"
#include "antilearn/synthgen.hpp"

using namespace antilearn;

namespace {

LabeledDataset table(std::size_t d, std::vector<double> values, std::vector<std::size_t> labels) {
    const std::size_t n = labels.size();
    return detail::continuous_table(n, d, std::move(values), std::move(labels));
}

// Continuous features with `classes` class names (labels need not be binary).
LabeledDataset labelled(std::size_t d, std::vector<double> values, std::vector<std::size_t> labels,
                        std::size_t classes) {
    const std::size_t n = labels.size();
    const auto base = detail::continuous_table(n, d, std::move(values), std::vector<std::size_t>(n, 0));
    std::vector<std::string> names;
    for (std::size_t c = 0; c < classes; ++c) names.push_back(std::to_string(c));
    return LabeledDataset(base.features(), std::move(labels), std::move(names));
}

double relative_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
    return std::abs(a - b) / scale;
}

}  // namespace

TEST(Mlp, GradedTargetsAndDecoding) {
    EXPECT_DOUBLE_EQ(graded_target(0, 4), 0.2);
    EXPECT_DOUBLE_EQ(graded_target(3, 4), 0.8);
    EXPECT_EQ(decode_graded(0.31, 4), 1u);
    EXPECT_EQ(decode_graded(0.5, 4), 1u);
    EXPECT_EQ(decode_graded(-0.2, 4), 0u);
    EXPECT_EQ(decode_graded(0.71, 4), 3u);
    EXPECT_EQ(decode_graded(7.0, 4), 3u);
}

TEST(Mlp, BinaryModeNeedsTwoClasses) {
    EXPECT_THROW(MlpModel(3, 2, 3, OutputMode::binary), InputError);
}

TEST(Mlp, GradientMatchesCentralDifferences) {
    const OutputMode modes[] = {OutputMode::graded, OutputMode::binary, OutputMode::one_per_class};
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        SplitMix64 rng(derive_seed(99, "grad", {trial}));
        const std::size_t d = 1 + rng.below(5), h = 1 + rng.below(6), n = 1 + rng.below(8);
        const OutputMode mode = modes[trial % 3];
        const std::size_t classes = mode == OutputMode::binary ? 2 : 2 + rng.below(3);
        std::vector<double> values(n * d);
        for (auto& v : values) v = rng.uniform(-1.0, 1.0);
        std::vector<std::size_t> labels(n);
        for (auto& y : labels) y = rng.below(classes);
        const auto batch = labelled(d, values, labels, classes);

        MlpModel m(d, h, classes, mode);
        m.initialize(rng(), 1.0);
        const auto analytic = mlp_gradient(m, batch);
        auto params = m.parameters();
        const double step = 1e-5;
        for (std::size_t p = 0; p < params.size(); ++p) {
            const double saved = params[p];
            params[p] = saved + step;
            const double up = m.loss(batch);
            params[p] = saved - step;
            const double down = m.loss(batch);
            params[p] = saved;
            const double numeric = (up - down) / (2.0 * step);
            ASSERT_LT(relative_error(analytic[p], numeric), 1e-4)
                << "trial " << trial << " parameter " << p << " analytic " << analytic[p] << " numeric " << numeric;
        }
    }
}

TEST(Mlp, GradientVanishesWhenOutputsHitTargets) {
    // Zero output weights and an output bias equal to the single target.
    const auto data = table(2, {0.3, 0.7}, {1});
    LabeledDataset batch(data.features(), {1}, {"0", "1"});
    MlpModel m(2, 3, 2, OutputMode::binary);
    m.initialize(5, 0.5);
    auto p = m.parameters();
    for (std::size_t i = 3 * 2 + 3; i < p.size(); ++i) p[i] = 0.0;
    p[p.size() - 1] = 1.0;
    for (double g : mlp_gradient(m, batch)) EXPECT_EQ(g, 0.0);
}

TEST(Mlp, DuplicatedBatchHasSameMeanGradient) {
    const auto once = table(2, {0.1, 0.9, 0.8, 0.2}, {0, 1});
    const auto twice = table(2, {0.1, 0.9, 0.8, 0.2, 0.1, 0.9, 0.8, 0.2}, {0, 1, 0, 1});
    MlpModel m(2, 4, 2, OutputMode::graded);
    m.initialize(8, 1.0);
    const auto a = mlp_gradient(m, once), b = mlp_gradient(m, twice);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(Mlp, TrainingLowersLossOnLearnableData) {
    const auto data = gen_learnable(200, 4);
    auto cfg = LearnerConfig::of(Algorithm::mlp);
    cfg.mlp.epochs = 200;
    cfg.mlp.learning_rate = 0.5;
    const auto model = train(cfg, data, 12);
    ASSERT_TRUE(model.info().initial_loss && model.info().final_loss);
    EXPECT_LE(*model.info().final_loss, *model.info().initial_loss);
    EXPECT_EQ(model.info().epochs_run, 200u);
}

TEST(Mlp, DivergenceRaisesNumericalError) {
    auto cfg = LearnerConfig::of(Algorithm::mlp);
    cfg.mlp.learning_rate = 1e6;
    cfg.mlp.epochs = 200;
    EXPECT_THROW(train(cfg, gen_learnable(50, 1), 3), NumericalError);
}

TEST(Mlp, SeedDeterminesModel) {
    auto cfg = LearnerConfig::of(Algorithm::mlp);
    cfg.mlp.epochs = 20;
    cfg.mlp.batch_size = 7;
    const auto data = gen_learnable(60, 2);
    const auto a = train(cfg, data, 5), b = train(cfg, data, 5), c = train(cfg, data, 6);
    const auto& pa = a.as<MlpModel>().parameters();
    const auto& pb = b.as<MlpModel>().parameters();
    const auto& pc = c.as<MlpModel>().parameters();
    EXPECT_TRUE(std::equal(pa.begin(), pa.end(), pb.begin()));
    EXPECT_FALSE(std::equal(pa.begin(), pa.end(), pc.begin()));
}

TEST(Cart, FitsXorExactly) {
    auto cfg = LearnerConfig::of(Algorithm::cart);
    cfg.cart.min_leaf = 1;
    const auto model = train(cfg, xor2(), 0);
    EXPECT_EQ(accuracy(model, xor2()), 1.0);
}

TEST(Cart, RespectsDepthAndLeafLimits) {
    const auto data = gen_learnable(300, 9);
    for (std::size_t depth : {1u, 3u, 6u})
        for (std::size_t leaf : {1u, 5u, 20u}) {
            CartConfig cfg{depth, leaf};
            const auto m = CartModel::fit(cfg, data);
            EXPECT_LE(m.depth(), depth);
            for (const auto& node : m.nodes())
                if (node.leaf) { EXPECT_GE(node.samples, leaf); }
        }
}

TEST(NaiveBayes, PosteriorSumsToOne) {
    const auto data = gen_learnable(100, 3);
    const auto m = NaiveBayesModel::fit({}, data);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto post = m.posterior(data.row(i));
        double s = 0.0;
        for (double p : post) s += p;
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(NaiveBayes, TieGoesToLowestClass) {
    // Symmetric data: every point has equal posteriors under both classes.
    const auto data = table(1, {-1.0, 1.0, -1.0, 1.0}, {0, 0, 1, 1});
    const auto m = NaiveBayesModel::fit({}, data);
    const double x[] = {0.0};
    EXPECT_EQ(m.predict(x).label, 0u);
}

TEST(NaiveBayes, BinaryTablesUseLaplaceSmoothing) {
    const auto full = gen_composite_full();
    const auto m = NaiveBayesModel::fit({}, full);
    const auto post = m.posterior(full.row(0));
    // Every attribute is independent of the parity label over the full table.
    EXPECT_NEAR(post[0], 0.5, 1e-12);
}

TEST(LsSvm, TwoPointClosedForm) {
    const auto data = table(1, {-1.0, 1.0}, {0, 1});
    LsSvmConfig cfg;
    cfg.gamma = 1.0;
    const auto m = LsSvmModel::fit(cfg, data);
    EXPECT_NEAR(m.bias(), 0.0, 1e-12);
    const auto a = m.alpha();
    EXPECT_NEAR(a[0], -1.0 / 3.0, 1e-12);
    EXPECT_NEAR(a[1], 1.0 / 3.0, 1e-12);
    const double origin[] = {0.0};
    EXPECT_NEAR(m.decision_values(origin)[0], 0.0, 1e-12);
    EXPECT_EQ(m.predict(origin).label, 1u);
    EXPECT_LT(m.kkt_residual(data), 1e-8);
}

TEST(LsSvm, KktResidualSmallOnRandomData) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto data = gen_random_labels(60, 4, s);
        for (auto kernel : {KernelKind::linear, KernelKind::rbf}) {
            LsSvmConfig cfg;
            cfg.kernel = kernel;
            cfg.gamma = 10.0;
            EXPECT_LT(LsSvmModel::fit(cfg, data).kkt_residual(data), 1e-8);
        }
    }
}

TEST(LsSvm, MultiClassOneVsRest) {
    const auto data = labelled(1, {0.0, 0.1, 5.0, 5.1, 10.0, 10.1}, {0, 0, 1, 1, 2, 2}, 3);
    LsSvmConfig cfg;
    cfg.kernel = KernelKind::rbf;
    cfg.gamma = 100.0;
    const auto m = LsSvmModel::fit(cfg, data);
    EXPECT_EQ(m.machines(), 3u);
    for (std::size_t i = 0; i < data.size(); ++i) EXPECT_EQ(m.predict(data.row(i)).label, data.label(i));
}

TEST(Knn, OneNearestNeighbourMemorises) {
    const auto data = gen_random_labels(80, 3, 4);
    const auto model = train(LearnerConfig::of(Algorithm::knn), data, 0);
    EXPECT_EQ(accuracy(model, data), 1.0);
}

TEST(Train, RejectsBadInputs) {
    const auto data = gen_learnable(20, 1);
    const auto model = train(LearnerConfig::of(Algorithm::knn), data, 0);
    const double short_row[] = {0.1, 0.2};
    EXPECT_THROW(model.predict(short_row), InputError);

    const auto one_class = table(1, {0.0, 1.0}, {0, 0});
    for (auto a : {Algorithm::mlp, Algorithm::cart, Algorithm::naive_bayes, Algorithm::lssvm, Algorithm::knn})
        EXPECT_THROW(train(LearnerConfig::of(a), one_class, 0), InputError);

    auto cfg = LearnerConfig::of(Algorithm::mlp);
    cfg.mlp.hidden_units = 0;
    EXPECT_THROW(train(cfg, data, 0), InputError);
    EXPECT_THROW(cfg.set("mlp.nonsense", "1"), InputError);
    EXPECT_THROW(cfg.set("mlp.epochs", "many"), InputError);
}

TEST(Train, DeterministicForEveryAlgorithm) {
    const auto data = gen_learnable(80, 6);
    for (auto a : {Algorithm::mlp, Algorithm::cart, Algorithm::naive_bayes, Algorithm::lssvm, Algorithm::knn}) {
        auto cfg = LearnerConfig::of(a);
        cfg.mlp.epochs = 30;
        const auto m1 = train(cfg, data, 7), m2 = train(cfg, data, 7);
        for (std::size_t i = 0; i < data.size(); ++i)
            EXPECT_EQ(m1.predict(data.row(i)).scores, m2.predict(data.row(i)).scores);
        std::ostringstream d1, d2;
        m1.dump(d1);
        m2.dump(d2);
        EXPECT_EQ(d1.str(), d2.str());
    }
}
