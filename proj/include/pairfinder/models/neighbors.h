#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairfinder/models/classifier.h"

namespace pairfinder::models {

// Brute-force k nearest neighbours under the Euclidean metric. Score is the
// (optionally inverse-distance weighted) fraction of class-1 neighbours.
// If the query coincides with training points, only those exact matches vote.
// Distance ties are broken by training-row order.
class KNeighborsModel final : public Model {
public:
    KNeighborsModel(Matrix x, std::vector<int> y, std::size_t k, bool distance_weighted)
        : x_(std::move(x)), y_(std::move(y)), k_(k), distance_weighted_(distance_weighted) {}

    double score(std::span<const double> x) const override;

private:
    Matrix x_;
    std::vector<int> y_;
    std::size_t k_;
    bool distance_weighted_;
};

std::unique_ptr<Model> fit_k_neighbors(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                       std::uint64_t seed);

}  // namespace pairfinder::models
