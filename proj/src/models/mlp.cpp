#include "pairfinder/models/mlp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pairfinder/common/random.h"

namespace pairfinder::models {

double MlpModel::score(std::span<const double> x) const {
    double z = b2_;
    for (std::size_t h = 0; h < hidden_; ++h) {
        double a = b1_[h];
        const double* w = w1_.data() + h * inputs_;
        for (std::size_t j = 0; j < inputs_; ++j) a += w[j] * x[j];
        if (a > 0.0) z += w2_[h] * a;
    }
    return sigmoid(z);
}

namespace {

struct Adam {
    double learning_rate;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::size_t t = 0;
    std::vector<double> m;
    std::vector<double> v;

    Adam(std::size_t size, double lr) : learning_rate(lr), m(size, 0.0), v(size, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grads) {
        ++t;
        const double correction = learning_rate * std::sqrt(1.0 - std::pow(beta2, static_cast<double>(t))) /
                                  (1.0 - std::pow(beta1, static_cast<double>(t)));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
            params[i] -= correction * m[i] / (std::sqrt(v[i]) + epsilon);
        }
    }
};

}  // namespace

std::unique_ptr<Model> fit_mlp(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                               std::uint64_t seed) {
    const std::size_t hidden = count_param(params, "hidden");
    const double alpha = param(params, "alpha");
    const std::size_t max_iter = count_param(params, "max_iter");
    const double tol = param(params, "tol");
    const std::size_t patience = count_param(params, "n_iter_no_change");
    const double learning_rate = param(params, "learning_rate");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const std::size_t batch_size = std::min(count_param(params, "batch_size"), n);

    // Flat parameter vector: [w1 (hidden*d) | b1 (hidden) | w2 (hidden) | b2]
    const std::size_t off_b1 = hidden * d;
    const std::size_t off_w2 = off_b1 + hidden;
    const std::size_t off_b2 = off_w2 + hidden;
    std::vector<double> theta(off_b2 + 1);

    Rng rng(seed);
    const double bound1 = std::sqrt(6.0 / static_cast<double>(d + hidden));
    for (std::size_t i = 0; i < off_w2; ++i) theta[i] = rng.uniform(-bound1, bound1);
    const double bound2 = std::sqrt(2.0 / static_cast<double>(hidden + 1));
    for (std::size_t i = off_w2; i < theta.size(); ++i) theta[i] = rng.uniform(-bound2, bound2);

    Adam optimizer(theta.size(), learning_rate);
    std::vector<double> grad(theta.size());
    std::vector<double> activation(hidden);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;
    for (std::size_t epoch = 0; epoch < max_iter; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t stop = std::min(start + batch_size, n);
            const double batch = static_cast<double>(stop - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            double loss = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                const auto row = x.row(order[k]);
                double z = theta[off_b2];
                for (std::size_t h = 0; h < hidden; ++h) {
                    double a = theta[off_b1 + h];
                    const double* w = theta.data() + h * d;
                    for (std::size_t j = 0; j < d; ++j) a += w[j] * row[j];
                    activation[h] = a > 0.0 ? a : 0.0;
                    z += theta[off_w2 + h] * activation[h];
                }
                const double p = sigmoid(z);
                const int label = y[order[k]];
                const double clipped = std::clamp(p, 1e-15, 1.0 - 1e-15);
                loss -= label ? std::log(clipped) : std::log(1.0 - clipped);

                const double delta = (p - label) / batch;
                grad[off_b2] += delta;
                for (std::size_t h = 0; h < hidden; ++h) {
                    if (activation[h] <= 0.0) continue;
                    grad[off_w2 + h] += delta * activation[h];
                    const double back = delta * theta[off_w2 + h];
                    grad[off_b1 + h] += back;
                    double* g = grad.data() + h * d;
                    for (std::size_t j = 0; j < d; ++j) g[j] += back * row[j];
                }
            }
            double penalty = 0.0;
            for (std::size_t i = 0; i < off_b1; ++i) {
                penalty += theta[i] * theta[i];
                grad[i] += alpha * theta[i] / batch;
            }
            for (std::size_t i = off_w2; i < off_b2; ++i) {
                penalty += theta[i] * theta[i];
                grad[i] += alpha * theta[i] / batch;
            }
            loss = loss / batch + 0.5 * alpha * penalty / batch;
            epoch_loss += loss * batch;
            optimizer.step(theta, grad);
        }
        epoch_loss /= static_cast<double>(n);

        if (epoch_loss > best_loss - tol) ++stalled;
        else stalled = 0;
        best_loss = std::min(best_loss, epoch_loss);
        if (stalled > patience) break;
    }

    std::vector<double> w1(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(off_b1));
    std::vector<double> b1(theta.begin() + static_cast<std::ptrdiff_t>(off_b1),
                           theta.begin() + static_cast<std::ptrdiff_t>(off_w2));
    std::vector<double> w2(theta.begin() + static_cast<std::ptrdiff_t>(off_w2),
                           theta.begin() + static_cast<std::ptrdiff_t>(off_b2));
    return std::make_unique<MlpModel>(d, hidden, std::move(w1), std::move(b1), std::move(w2), theta[off_b2]);
}

}  // namespace pairfinder::models
