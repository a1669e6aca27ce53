#include "pairfinder/models/naive_bayes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pairfinder::models {

double GaussianNbModel::log_likelihood(int cls, std::span<const double> x) const {
    double total = log_prior_[cls];
    const auto& mean = means_[cls];
    const auto& var = variances_[cls];
    for (std::size_t j = 0; j < mean.size(); ++j) {
        const double diff = x[j] - mean[j];
        total -= 0.5 * std::log(2.0 * std::numbers::pi * var[j]) + diff * diff / (2.0 * var[j]);
    }
    return total;
}

double GaussianNbModel::score(std::span<const double> x) const {
    // P(1 | x) = sigmoid(log p(x, 1) - log p(x, 0))
    return sigmoid(log_likelihood(1, x) - log_likelihood(0, x));
}

std::unique_ptr<Model> fit_gaussian_nb(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                       std::uint64_t) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    double max_variance = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += (x(i, j) - mean) * (x(i, j) - mean);
        max_variance = std::max(max_variance, var / static_cast<double>(n));
    }
    const double smoothing = param(params, "var_smoothing");
    double epsilon = smoothing * max_variance;
    if (!(epsilon > 0.0)) epsilon = smoothing > 0.0 ? smoothing : std::numeric_limits<double>::min();

    std::array<double, 2> counts{0.0, 0.0};
    std::array<std::vector<double>, 2> means{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    std::array<std::vector<double>, 2> variances{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        counts[y[i]] += 1.0;
        for (std::size_t j = 0; j < d; ++j) means[y[i]][j] += x(i, j);
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& m : means[c]) m /= counts[c];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x(i, j) - means[y[i]][j];
            variances[y[i]][j] += diff * diff;
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& v : variances[c]) v = v / counts[c] + epsilon;
    }
    const std::array<double, 2> log_prior{std::log(counts[0] / static_cast<double>(n)),
                                          std::log(counts[1] / static_cast<double>(n))};
    return std::make_unique<GaussianNbModel>(log_prior, std::move(means), std::move(variances));
}

}  // namespace pairfinder::models
