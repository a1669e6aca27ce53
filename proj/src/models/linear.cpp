#include "pairfinder/models/linear.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "pairfinder/common/random.h"

namespace pairfinder::models {

double LinearModel::margin(std::span<const double> x) const {
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * x[j];
    return z;
}

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

struct LogisticObjective {
    const Matrix& x;
    std::span<const int> y;
    double c;

    // theta = [w_0 .. w_{d-1}, b]
    double value(const Eigen::VectorXd& theta) const {
        const std::size_t d = x.cols();
        double total = 0.5 * theta.head(static_cast<Eigen::Index>(d)).squaredNorm();
        double loss = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double z = margin(theta, i);
            loss += softplus(z) - y[i] * z;
        }
        return total + c * loss;
    }

    double margin(const Eigen::VectorXd& theta, std::size_t i) const {
        const std::size_t d = x.cols();
        double z = theta[static_cast<Eigen::Index>(d)];
        for (std::size_t j = 0; j < d; ++j) z += theta[static_cast<Eigen::Index>(j)] * x(i, j);
        return z;
    }
};

}  // namespace

std::unique_ptr<Model> fit_logistic_regression(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                               std::uint64_t) {
    const double c = param(params, "C");
    const std::size_t max_iter = count_param(params, "max_iter");
    const double tol = param(params, "tol");
    const std::size_t d = x.cols();
    const auto dim = static_cast<Eigen::Index>(d + 1);

    LogisticObjective objective{x, y, c};
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    double current = objective.value(theta);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd gradient = Eigen::VectorXd::Zero(dim);
        Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd row(dim);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < d; ++j) row[static_cast<Eigen::Index>(j)] = x(i, j);
            row[static_cast<Eigen::Index>(d)] = 1.0;
            const double p = sigmoid(objective.margin(theta, i));
            gradient += c * (p - y[i]) * row;
            hessian.selfadjointView<Eigen::Lower>().rankUpdate(row, c * p * (1.0 - p));
        }
        hessian = hessian.selfadjointView<Eigen::Lower>();
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
            gradient[j] += theta[j];
            hessian(j, j) += 1.0;
        }
        hessian(dim - 1, dim - 1) += 1e-12;

        if (gradient.cwiseAbs().maxCoeff() < tol) break;
        const Eigen::VectorXd step = -hessian.ldlt().solve(gradient);
        const double slope = gradient.dot(step);

        double t = 1.0;
        Eigen::VectorXd candidate = theta + step;
        double value = objective.value(candidate);
        while (value > current + 1e-4 * t * slope && t > 1e-10) {
            t *= 0.5;
            candidate = theta + t * step;
            value = objective.value(candidate);
        }
        const double moved = (t * step).cwiseAbs().maxCoeff();
        theta = candidate;
        current = value;
        if (moved < tol) break;
    }

    std::vector<double> weights(d);
    for (std::size_t j = 0; j < d; ++j) weights[j] = theta[static_cast<Eigen::Index>(j)];
    return std::make_unique<LinearModel>(std::move(weights), theta[static_cast<Eigen::Index>(d)]);
}

std::unique_ptr<Model> fit_linear_svm(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                      std::uint64_t seed) {
    const double c = param(params, "C");
    const std::size_t max_iter = count_param(params, "max_iter");
    const double tol = param(params, "tol");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    // w[d] is the bias weight on a constant feature of value 1.
    std::vector<double> w(d + 1, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> diag(n);
    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 1.0;
        for (std::size_t j = 0; j < d; ++j) sq += x(i, j) * x(i, j);
        diag[i] = sq;
        sign[i] = y[i] == 1 ? 1.0 : -1.0;
    }

    Rng rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 0; epoch < max_iter; ++epoch) {
        rng.shuffle(order);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();
        for (std::size_t i : order) {
            double z = w[d];
            for (std::size_t j = 0; j < d; ++j) z += w[j] * x(i, j);
            const double g = sign[i] * z - 1.0;
            double pg = g;
            if (alpha[i] == 0.0) pg = std::min(g, 0.0);
            else if (alpha[i] == c) pg = std::max(g, 0.0);
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (std::abs(pg) > 1e-12) {
                const double previous = alpha[i];
                alpha[i] = std::clamp(alpha[i] - g / diag[i], 0.0, c);
                const double delta = (alpha[i] - previous) * sign[i];
                for (std::size_t j = 0; j < d; ++j) w[j] += delta * x(i, j);
                w[d] += delta;
            }
        }
        if (pg_max - pg_min <= tol) break;
    }
    const double bias = w[d];
    w.pop_back();
    return std::make_unique<LinearModel>(std::move(w), bias);
}

}  // namespace pairfinder::models
