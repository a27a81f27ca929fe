#pragma once

// Least-squares SVM. For training points x_1..x_n with targets y_i in {-1, +1}
// the bias b and dual weights alpha solve the bordered system
//
//     [ 0   1^T         ] [ b     ]   [ 0 ]
//     [ 1   K + I/gamma ] [ alpha ] = [ y ]
//
// and the decision value is f(x) = sum_i alpha_i k(x, x_i) + b. Two classes use
// one system (class 1 is the positive class, f >= 0); more classes use
// one-vs-rest right-hand sides against the same factorisation.
//
// With H = K + I/gamma symmetric positive definite the system is solved by
// block elimination: H eta = 1, H nu = y, b = 1^T nu / 1^T eta,
// alpha = nu - b eta. If H cannot be Cholesky-factorised the bordered matrix
// is solved directly by partial-pivot LU.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "antilearn/dataset.hpp"
#include "antilearn/error.hpp"
#include "antilearn/learners/common.hpp"

namespace antilearn {

enum class KernelKind { linear, rbf };

struct LsSvmConfig {
    double gamma = 1.0;
    KernelKind kernel = KernelKind::linear;
    double rbf_sigma = 1.0;
};

class LsSvmModel {
public:
    LsSvmModel() = default;

    static LsSvmModel fit(const LsSvmConfig& cfg, const LabeledDataset& data) {
        LsSvmModel m;
        m.cfg_ = cfg;
        m.classes_ = data.n_classes();
        const std::size_t n = data.size();
        const std::size_t d = data.features().cols();
        m.support_ = Eigen::MatrixXd(n, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) m.support_(Eigen::Index(i), Eigen::Index(j)) = data.row(i)[j];

        const Eigen::MatrixXd A = m.system_matrix();
        const Eigen::MatrixXd rhs = m.right_hand_sides(data);
        const Eigen::Index nn = Eigen::Index(n);
        Eigen::LLT<Eigen::MatrixXd> llt(A.bottomRightCorner(nn, nn));
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXd eta = llt.solve(Eigen::VectorXd::Ones(nn));
            const Eigen::MatrixXd nu = llt.solve(rhs.bottomRows(nn));
            m.solution_.resize(nn + 1, rhs.cols());
            for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
                const double b = nu.col(c).sum() / eta.sum();
                m.solution_(0, c) = b;
                m.solution_.col(c).tail(nn) = nu.col(c) - b * eta;
            }
        } else {
            m.solution_ = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
        }
        if (!m.solution_.allFinite()) throw NumericalError("lssvm: linear system solution is not finite");
        return m;
    }

    double kernel(std::span<const double> a, Eigen::Index support_row) const {
        const auto s = support_.row(support_row);
        if (cfg_.kernel == KernelKind::linear) {
            double dot = 0.0;
            for (Eigen::Index j = 0; j < s.size(); ++j) dot += a[std::size_t(j)] * s(j);
            return dot;
        }
        double sq = 0.0;
        for (Eigen::Index j = 0; j < s.size(); ++j) {
            const double diff = a[std::size_t(j)] - s(j);
            sq += diff * diff;
        }
        return std::exp(-sq / (2.0 * cfg_.rbf_sigma * cfg_.rbf_sigma));
    }

    /// One decision value per machine (one machine for two classes).
    std::vector<double> decision_values(std::span<const double> x) const {
        const Eigen::Index n = support_.rows();
        std::vector<double> out(std::size_t(solution_.cols()));
        std::vector<double> k(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) k[std::size_t(i)] = kernel(x, i);
        for (Eigen::Index c = 0; c < solution_.cols(); ++c) {
            double f = solution_(0, c);
            for (Eigen::Index i = 0; i < n; ++i) f += solution_(i + 1, c) * k[std::size_t(i)];
            out[std::size_t(c)] = f;
        }
        return out;
    }

    Prediction predict(std::span<const double> x) const {
        auto f = decision_values(x);
        if (classes_ == 2) return {f[0] >= 0.0 ? std::size_t{1} : std::size_t{0}, std::move(f)};
        const std::size_t label = argmax_low(f);
        return {label, std::move(f)};
    }

    /// Largest 2-norm over machines of A * [b; alpha] - rhs on the training set.
    double kkt_residual(const LabeledDataset& data) const {
        const Eigen::MatrixXd r = system_matrix() * solution_ - right_hand_sides(data);
        return r.colwise().norm().maxCoeff();
    }

    double bias(std::size_t machine = 0) const { return solution_(0, Eigen::Index(machine)); }
    std::vector<double> alpha(std::size_t machine = 0) const {
        std::vector<double> a(std::size_t(support_.rows()));
        for (Eigen::Index i = 0; i < support_.rows(); ++i) a[std::size_t(i)] = solution_(i + 1, Eigen::Index(machine));
        return a;
    }
    std::size_t machines() const noexcept { return std::size_t(solution_.cols()); }
    const LsSvmConfig& config() const noexcept { return cfg_; }

    void dump(std::ostream& os) const {
        for (std::size_t c = 0; c < machines(); ++c) {
            os << "machine " << c << " bias " << format_number(bias(c)) << "\n  alpha";
            for (double a : alpha(c)) os << ' ' << format_number(a);
            os << '\n';
        }
    }

private:
    Eigen::MatrixXd system_matrix() const {
        const Eigen::Index n = support_.rows();
        Eigen::MatrixXd A(n + 1, n + 1);
        A(0, 0) = 0.0;
        std::vector<double> xi(std::size_t(support_.cols()));
        for (Eigen::Index i = 0; i < n; ++i) {
            A(0, i + 1) = 1.0;
            A(i + 1, 0) = 1.0;
            for (Eigen::Index j = 0; j < support_.cols(); ++j) xi[std::size_t(j)] = support_(i, j);
            for (Eigen::Index j = 0; j <= i; ++j) {
                const double k = kernel(xi, j);
                A(i + 1, j + 1) = k;
                A(j + 1, i + 1) = k;
            }
            A(i + 1, i + 1) += 1.0 / cfg_.gamma;
        }
        return A;
    }

    Eigen::MatrixXd right_hand_sides(const LabeledDataset& data) const {
        const Eigen::Index n = Eigen::Index(data.size());
        const Eigen::Index machines = classes_ == 2 ? 1 : Eigen::Index(classes_);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 1, machines);
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::size_t y = data.label(std::size_t(i));
            for (Eigen::Index c = 0; c < machines; ++c) {
                const std::size_t positive = classes_ == 2 ? 1 : std::size_t(c);
                rhs(i + 1, c) = y == positive ? 1.0 : -1.0;
            }
        }
        return rhs;
    }

    LsSvmConfig cfg_;
    std::size_t classes_ = 0;
    Eigen::MatrixXd support_;
    Eigen::MatrixXd solution_;  // (n + 1) x machines: row 0 is b, rows 1..n are alpha
};

}  // namespace antilearn
