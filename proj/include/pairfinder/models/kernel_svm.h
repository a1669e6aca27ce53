#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairfinder/models/classifier.h"

namespace pairfinder::models {

// RBF-kernel SVM. Decision f(x) = sum_i coef_i * exp(-gamma |x - sv_i|^2) - rho,
// score = sigmoid(f(x)).
class KernelSvmModel final : public Model {
public:
    KernelSvmModel(Matrix support, std::vector<double> coef, double rho, double gamma)
        : support_(std::move(support)), coef_(std::move(coef)), rho_(rho), gamma_(gamma) {}

    double decision(std::span<const double> x) const;
    double score(std::span<const double> x) const override { return sigmoid(decision(x)); }

    std::size_t support_count() const noexcept { return support_.rows(); }
    double gamma() const noexcept { return gamma_; }

private:
    Matrix support_;
    std::vector<double> coef_;
    double rho_;
    double gamma_;
};

// C-SVC dual solved by SMO with second-order working-set selection, stopping
// at a maximal KKT violation below `tol` or after `max_iter` pair updates.
// gamma = 1 / (d * Var(X)) when the `gamma` hyperparameter is 0 ("scale").
std::unique_ptr<Model> fit_kernel_svm(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                      std::uint64_t seed);

}  // namespace pairfinder::models
