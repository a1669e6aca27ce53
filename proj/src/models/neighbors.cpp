#include "pairfinder/models/neighbors.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pairfinder::models {

double KNeighborsModel::score(std::span<const double> x) const {
    const std::size_t n = x_.rows();
    std::vector<std::pair<double, std::size_t>> distances(n);
    std::size_t exact = 0;
    std::size_t exact_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        const auto row = x_.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double diff = row[j] - x[j];
            sq += diff * diff;
        }
        distances[i] = {sq, i};
        if (sq == 0.0) {
            ++exact;
            exact_positive += static_cast<std::size_t>(y_[i]);
        }
    }
    if (exact > 0) return static_cast<double>(exact_positive) / static_cast<double>(exact);

    const std::size_t k = std::min(k_, n);
    std::partial_sort(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(k), distances.end());
    double weight_sum = 0.0;
    double positive = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double w = distance_weighted_ ? 1.0 / std::sqrt(distances[i].first) : 1.0;
        weight_sum += w;
        positive += w * y_[distances[i].second];
    }
    return positive / weight_sum;
}

std::unique_ptr<Model> fit_k_neighbors(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                       std::uint64_t) {
    return std::make_unique<KNeighborsModel>(x, std::vector<int>(y.begin(), y.end()), count_param(params, "n_neighbors"),
                                             param(params, "distance_weighted") != 0.0);
}

}  // namespace pairfinder::models
