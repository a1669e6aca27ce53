#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairfinder/models/classifier.h"

namespace pairfinder::models {

// One hidden layer of rectified units feeding a logistic output unit.
class MlpModel final : public Model {
public:
    MlpModel(std::size_t inputs, std::size_t hidden, std::vector<double> w1, std::vector<double> b1,
             std::vector<double> w2, double b2)
        : inputs_(inputs), hidden_(hidden), w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2) {}

    double score(std::span<const double> x) const override;

    std::size_t hidden_units() const noexcept { return hidden_; }

private:
    std::size_t inputs_;
    std::size_t hidden_;
    std::vector<double> w1_;  // hidden x inputs, row-major
    std::vector<double> b1_;
    std::vector<double> w2_;
    double b2_;
};

// Adam on mini-batches (seeded shuffle each epoch) minimising mean log-loss
// plus 0.5 * alpha * |W|^2 / batch_size. Training stops after `max_iter`
// epochs or once the epoch loss has failed to improve by `tol` for more than
// `n_iter_no_change` consecutive epochs.
std::unique_ptr<Model> fit_mlp(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                               std::uint64_t seed);

}  // namespace pairfinder::models
