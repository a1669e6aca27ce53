#include "pairfinder/models/kernel_svm.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pairfinder::models {

namespace {

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
    double sq = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        sq += diff * diff;
    }
    return std::exp(-gamma * sq);
}

// Lazily computed rows of Q_ij = y_i y_j K(x_i, x_j).
class KernelRows {
public:
    KernelRows(const Matrix& x, const std::vector<double>& sign, double gamma)
        : x_(x), sign_(sign), gamma_(gamma), rows_(x.rows()) {}

    const std::vector<double>& row(std::size_t i) {
        auto& cached = rows_[i];
        if (cached.empty()) {
            cached.resize(x_.rows());
            for (std::size_t j = 0; j < x_.rows(); ++j) cached[j] = sign_[i] * sign_[j] * rbf(x_.row(i), x_.row(j), gamma_);
        }
        return cached;
    }

private:
    const Matrix& x_;
    const std::vector<double>& sign_;
    double gamma_;
    std::vector<std::vector<double>> rows_;
};

constexpr double kTau = 1e-12;

}  // namespace

double KernelSvmModel::decision(std::span<const double> x) const {
    double f = -rho_;
    for (std::size_t i = 0; i < support_.rows(); ++i) f += coef_[i] * rbf(support_.row(i), x, gamma_);
    return f;
}

std::unique_ptr<Model> fit_kernel_svm(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                      std::uint64_t) {
    const double c = param(params, "C");
    const std::size_t max_iter = count_param(params, "max_iter");
    const double tol = param(params, "tol");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    double gamma = param(params, "gamma");
    if (gamma == 0.0) {
        double mean = 0.0;
        for (double v : x.data()) mean += v;
        mean /= static_cast<double>(x.data().size());
        double var = 0.0;
        for (double v : x.data()) var += (v - mean) * (v - mean);
        var /= static_cast<double>(x.data().size());
        gamma = var > 0.0 ? 1.0 / (static_cast<double>(d) * var) : 1.0;
    }

    std::vector<double> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] == 1 ? 1.0 : -1.0;
    KernelRows q(x, sign, gamma);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    const std::vector<double> diag(n, 1.0);  // K(x, x) = 1 for the RBF kernel

    auto is_upper = [&](std::size_t t) { return alpha[t] >= c; };
    auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // Working set: i maximises -y G over I_up; j minimises the second-order
        // objective decrease over I_low.
        double gmax = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i_sel = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (sign[t] > 0) {
                if (!is_upper(t) && -grad[t] >= gmax) {
                    gmax = -grad[t];
                    i_sel = static_cast<std::ptrdiff_t>(t);
                }
            } else if (!is_lower(t) && grad[t] >= gmax) {
                gmax = grad[t];
                i_sel = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i_sel < 0) break;
        const auto i = static_cast<std::size_t>(i_sel);
        const auto& qi = q.row(i);

        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_objective = std::numeric_limits<double>::infinity();
        std::ptrdiff_t j_sel = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (sign[t] > 0) {
                if (is_lower(t)) continue;
                const double grad_diff = gmax + grad[t];
                gmax2 = std::max(gmax2, grad[t]);
                if (grad_diff > 0.0) {
                    const double quad = std::max(diag[i] + diag[t] - 2.0 * sign[i] * qi[t], kTau);
                    const double objective = -(grad_diff * grad_diff) / quad;
                    if (objective <= best_objective) {
                        best_objective = objective;
                        j_sel = static_cast<std::ptrdiff_t>(t);
                    }
                }
            } else {
                if (is_upper(t)) continue;
                const double grad_diff = gmax - grad[t];
                gmax2 = std::max(gmax2, -grad[t]);
                if (grad_diff > 0.0) {
                    const double quad = std::max(diag[i] + diag[t] + 2.0 * sign[i] * qi[t], kTau);
                    const double objective = -(grad_diff * grad_diff) / quad;
                    if (objective <= best_objective) {
                        best_objective = objective;
                        j_sel = static_cast<std::ptrdiff_t>(t);
                    }
                }
            }
        }
        if (gmax + gmax2 < tol || j_sel < 0) break;
        const auto j = static_cast<std::size_t>(j_sel);
        const auto& qj = q.row(j);

        const double old_i = alpha[i];
        const double old_j = alpha[j];
        if (sign[i] != sign[j]) {
            const double quad = std::max(diag[i] + diag[j] + 2.0 * qi[j], kTau);
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double quad = std::max(diag[i] + diag[j] - 2.0 * qi[j], kTau);
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double delta_i = alpha[i] - old_i;
        const double delta_j = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * delta_i + qj[t] * delta_j;
    }

    // rho from free vectors, or the midpoint of the feasible interval.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = sign[t] * grad[t];
        if (is_upper(t)) {
            if (sign[t] < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (is_lower(t)) {
            if (sign[t] > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            ++free_count;
            free_sum += yg;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (upper + lower);

    Matrix support;
    std::vector<double> coef;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            support.append_row(x.row(t));
            coef.push_back(alpha[t] * sign[t]);
        }
    }
    if (support.empty()) support = Matrix(0, d);
    return std::make_unique<KernelSvmModel>(std::move(support), std::move(coef), rho, gamma);
}

}  // namespace pairfinder::models
