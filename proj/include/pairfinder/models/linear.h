#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairfinder/models/classifier.h"

namespace pairfinder::models {

// Affine decision function w.x + b; score = sigmoid(w.x + b).
class LinearModel final : public Model {
public:
    LinearModel(std::vector<double> weights, double bias) : weights_(std::move(weights)), bias_(bias) {}

    double margin(std::span<const double> x) const;
    double score(std::span<const double> x) const override { return sigmoid(margin(x)); }

    const std::vector<double>& weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }

private:
    std::vector<double> weights_;
    double bias_;
};

// L2-regularised logistic regression: minimises
// 0.5 * |w|^2 + C * sum(log-loss), intercept unpenalised, by damped Newton
// iterations until the largest coefficient step is below `tol`.
std::unique_ptr<Model> fit_logistic_regression(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                               std::uint64_t seed);

// Hinge-loss SVM, 0.5 * |w|^2 + C * sum(max(0, 1 - y (w.x + b))), solved by
// dual coordinate descent with the bias folded in as a constant feature.
std::unique_ptr<Model> fit_linear_svm(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                      std::uint64_t seed);

}  // namespace pairfinder::models
