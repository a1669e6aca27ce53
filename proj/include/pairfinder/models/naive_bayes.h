#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pairfinder/models/classifier.h"

namespace pairfinder::models {

// Gaussian naive Bayes. Per-class variances are inflated by
// var_smoothing * (largest feature variance); when every feature is constant
// that product is zero and var_smoothing itself is used, so the posterior
// falls back to the class prior.
class GaussianNbModel final : public Model {
public:
    GaussianNbModel(std::array<double, 2> log_prior, std::array<std::vector<double>, 2> means,
                    std::array<std::vector<double>, 2> variances)
        : log_prior_(log_prior), means_(std::move(means)), variances_(std::move(variances)) {}

    double score(std::span<const double> x) const override;

    double log_likelihood(int cls, std::span<const double> x) const;

private:
    std::array<double, 2> log_prior_;
    std::array<std::vector<double>, 2> means_;
    std::array<std::vector<double>, 2> variances_;
};

std::unique_ptr<Model> fit_gaussian_nb(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                       std::uint64_t seed);

}  // namespace pairfinder::models
