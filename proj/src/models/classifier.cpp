#include "pairfinder/models/classifier.h"

#include <algorithm>
#include <cmath>

#include "pairfinder/common/error.h"
#include "pairfinder/common/random.h"
#include "pairfinder/common/text.h"
#include "pairfinder/models/kernel_svm.h"
#include "pairfinder/models/linear.h"
#include "pairfinder/models/mlp.h"
#include "pairfinder/models/naive_bayes.h"
#include "pairfinder/models/neighbors.h"
#include "pairfinder/models/tree.h"

namespace pairfinder::models {

double param(const Hyperparameters& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) raise(ErrorCategory::Config, "missing hyperparameter '" + name + "'");
    return it->second;
}

std::size_t count_param(const Hyperparameters& params, const std::string& name) {
    const double value = param(params, name);
    if (value < 0.0 || std::floor(value) != value) {
        raise(ErrorCategory::Config, "hyperparameter '" + name + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(value);
}

std::string ClassifierSpec::canonical_id() const {
    std::string id = kind + "{";
    bool first = true;
    for (const auto& [name, value] : params) {
        if (!first) id += ';';
        first = false;
        id += name;
        id += '=';
        id += format_double(value);
    }
    id += '}';
    return id;
}

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    const std::size_t n = x.rows();
    s.means_.assign(x.cols(), 0.0);
    s.scales_.assign(x.cols(), 1.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += (x(i, j) - mean) * (x(i, j) - mean);
        var /= static_cast<double>(n);
        s.means_[j] = mean;
        const double scale = std::sqrt(var);
        s.scales_[j] = scale > 1e-12 * std::max(1.0, std::abs(mean)) ? scale : 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - means_[j]) / scales_[j];
    return out;
}

Matrix Standardizer::apply(const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = (x(i, j) - means_[j]) / scales_[j];
    }
    return out;
}

double TrainedClassifier::score(std::span<const double> x) const {
    if (x.size() != n_features_) {
        raise(ErrorCategory::Domain, "expected " + std::to_string(n_features_) + " features, got " +
                                         std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) raise(ErrorCategory::Domain, "non-finite feature value");
    }
    if (scaler_) {
        const auto scaled = scaler_->apply(x);
        return model_->score(scaled);
    }
    return model_->score(x);
}

std::vector<double> TrainedClassifier::score_rows(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = score(x.row(i));
    return out;
}

std::vector<int> TrainedClassifier::predict_rows(const Matrix& x) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
    return out;
}

namespace {

ParamRange positive(double max = 1e9) { return {0.0, max, false, true}; }
ParamRange count(double min, double max) { return {min, max, true, false}; }

ModelRegistry make_builtin() {
    ModelRegistry registry;
    registry.add({"GradientBoosting",
                  {{"n_estimators", 100}, {"learning_rate", 0.01}, {"max_depth", 12},
                   {"min_samples_split", 2}, {"min_samples_leaf", 1}},
                  {{"n_estimators", count(1, 10000)}, {"learning_rate", positive(1.0)}, {"max_depth", count(1, 64)},
                   {"min_samples_split", count(2, 1e9)}, {"min_samples_leaf", count(1, 1e9)}},
                  {{"max_depth", {6, 12, 18}}},
                  false,
                  fit_gradient_boosting});
    registry.add({"LogisticRegression",
                  {{"C", 0.1}, {"max_iter", 10000}, {"tol", 1e-6}},
                  {{"C", positive()}, {"max_iter", count(1, 1e7)}, {"tol", positive(1.0)}},
                  {{"C", {0.01, 0.1, 1.0}}},
                  true,
                  fit_logistic_regression});
    registry.add({"DecisionTree",
                  {{"max_depth", 12}, {"min_samples_split", 6}, {"min_samples_leaf", 4}},
                  {{"max_depth", count(1, 64)}, {"min_samples_split", count(2, 1e9)}, {"min_samples_leaf", count(1, 1e9)}},
                  {{"max_depth", {6, 12, 18}}},
                  false,
                  fit_decision_tree});
    registry.add({"RandomForest",
                  {{"n_estimators", 500}, {"max_depth", 10}, {"min_samples_split", 2}, {"min_samples_leaf", 1}},
                  {{"n_estimators", count(1, 100000)}, {"max_depth", count(1, 64)},
                   {"min_samples_split", count(2, 1e9)}, {"min_samples_leaf", count(1, 1e9)}},
                  {{"n_estimators", {100, 300, 500}}},
                  false,
                  fit_random_forest});
    registry.add({"KNeighbors",
                  {{"n_neighbors", 7}, {"distance_weighted", 1}},
                  {{"n_neighbors", count(1, 1e6)}, {"distance_weighted", count(0, 1)}},
                  {{"n_neighbors", {3, 7, 11}}},
                  true,
                  fit_k_neighbors});
    registry.add({"GaussianNB",
                  {{"var_smoothing", 1e-9}},
                  {{"var_smoothing", positive(1.0)}},
                  {{"var_smoothing", {1e-10, 1e-9, 1e-8}}},
                  false,
                  fit_gaussian_nb});
    registry.add({"LinearSVM",
                  {{"C", 1.0}, {"max_iter", 10000}, {"tol", 1e-4}},
                  {{"C", positive()}, {"max_iter", count(1, 1e7)}, {"tol", positive(1.0)}},
                  {{"C", {0.1, 1.0, 10.0}}},
                  true,
                  fit_linear_svm});
    registry.add({"MLP",
                  {{"hidden", 69}, {"alpha", 1e-4}, {"max_iter", 10000}, {"tol", 1e-6}, {"n_iter_no_change", 10},
                   {"learning_rate", 1e-3}, {"batch_size", 200}},
                  {{"hidden", count(1, 4096)}, {"alpha", {0.0, 1e3, false, false}}, {"max_iter", count(1, 1e7)},
                   {"tol", positive(1.0)}, {"n_iter_no_change", count(1, 1e6)}, {"learning_rate", positive(1.0)},
                   {"batch_size", count(1, 1e9)}},
                  {{"hidden", {32, 69, 128}}},
                  true,
                  fit_mlp});
    registry.add({"KernelSVM",
                  {{"C", 1.0}, {"gamma", 0.0}, {"max_iter", 5000}, {"tol", 1e-3}},
                  {{"C", positive()}, {"gamma", {0.0, 1e6, false, false}}, {"max_iter", count(1, 1e8)},
                   {"tol", positive(1.0)}},
                  {{"C", {0.1, 1.0, 10.0}}},
                  true,
                  fit_kernel_svm});
    return registry;
}

void check_range(const std::string& kind, const std::string& name, double value, const ParamRange& range) {
    const bool below = range.exclusive_min ? !(value > range.min) : !(value >= range.min);
    if (!std::isfinite(value) || below || value > range.max || (range.integer && std::floor(value) != value)) {
        raise(ErrorCategory::Config, kind + ": hyperparameter " + name + "=" + format_double(value) + " out of range");
    }
}

}  // namespace

ModelRegistry& ModelRegistry::builtin() {
    static ModelRegistry registry = make_builtin();
    return registry;
}

void ModelRegistry::add(ModelKindInfo info) {
    if (info.name.empty() || !info.fit) raise(ErrorCategory::Config, "model kind needs a name and a fit function");
    kinds_.insert_or_assign(info.name, std::move(info));
}

bool ModelRegistry::contains(std::string_view name) const { return kinds_.find(name) != kinds_.end(); }

const ModelKindInfo& ModelRegistry::get(std::string_view name) const {
    auto it = kinds_.find(name);
    if (it == kinds_.end()) raise(ErrorCategory::Config, "unknown model kind '" + std::string(name) + "'");
    return it->second;
}

std::vector<std::string> ModelRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : kinds_) out.push_back(name);
    return out;
}

ClassifierSpec make_spec(std::string_view kind, const Hyperparameters& overrides, const ModelRegistry& registry) {
    const auto& info = registry.get(kind);
    ClassifierSpec spec{info.name, info.defaults};
    for (const auto& [name, value] : overrides) {
        auto range = info.ranges.find(name);
        if (range == info.ranges.end()) {
            raise(ErrorCategory::Config, info.name + ": unknown hyperparameter '" + name + "'");
        }
        check_range(info.name, name, value, range->second);
        spec.params[name] = value;
    }
    return spec;
}

TrainedClassifier train(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y, std::uint64_t seed,
                        const ModelRegistry& registry) {
    const auto& info = registry.get(spec.kind);
    if (x.rows() == 0 || x.rows() != y.size()) raise(ErrorCategory::Training, spec.kind + ": empty or misaligned learn set");
    for (double v : x.data()) {
        if (!std::isfinite(v)) raise(ErrorCategory::Training, spec.kind + ": non-finite feature in learn set");
    }
    std::size_t positives = 0;
    for (int label : y) {
        if (label != 0 && label != 1) raise(ErrorCategory::Training, spec.kind + ": labels must be 0 or 1");
        positives += static_cast<std::size_t>(label);
    }
    if (positives == 0 || positives == y.size()) raise(ErrorCategory::Training, spec.kind + ": degenerate labels");

    // Validate every value, including ones that came in through a raw spec.
    for (const auto& [name, value] : spec.params) {
        auto range = info.ranges.find(name);
        if (range == info.ranges.end()) raise(ErrorCategory::Config, spec.kind + ": unknown hyperparameter '" + name + "'");
        check_range(spec.kind, name, value, range->second);
    }

    std::optional<Standardizer> scaler;
    std::shared_ptr<const Model> model;
    if (info.standardize) {
        scaler = Standardizer::fit(x);
        model = info.fit(spec.params, scaler->apply(x), y, seed);
    } else {
        model = info.fit(spec.params, x, y, seed);
    }
    return TrainedClassifier(spec, std::move(scaler), std::move(model), x.cols());
}

std::vector<ClassifierSpec> make_grid(std::string_view kind, const GridAxes& axes, const ModelRegistry& registry) {
    const auto& info = registry.get(kind);
    std::vector<Hyperparameters> combos{{}};
    for (const auto& [name, values] : axes) {
        if (values.empty()) raise(ErrorCategory::Config, info.name + ": grid axis '" + name + "' is empty");
        std::vector<Hyperparameters> next;
        for (const auto& combo : combos) {
            for (double value : values) {
                auto extended = combo;
                extended[name] = value;
                next.push_back(std::move(extended));
            }
        }
        combos = std::move(next);
    }
    std::vector<ClassifierSpec> grid;
    for (const auto& combo : combos) {
        auto spec = make_spec(kind, combo, registry);
        if (std::find(grid.begin(), grid.end(), spec) == grid.end()) grid.push_back(std::move(spec));
    }
    auto defaults = make_spec(kind, {}, registry);
    if (std::find(grid.begin(), grid.end(), defaults) == grid.end()) grid.push_back(std::move(defaults));
    return grid;
}

std::vector<ClassifierSpec> default_grid(std::string_view kind, const ModelRegistry& registry) {
    return make_grid(kind, registry.get(kind).default_grid, registry);
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size() || labels.empty()) {
        raise(ErrorCategory::Domain, "accuracy needs equal, non-zero lengths");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i] ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

GridSearchResult grid_search(const std::vector<ClassifierSpec>& grid, const Matrix& learn_x, std::span<const int> learn_y,
                             const Matrix& val_x, std::span<const int> val_y, std::uint64_t master_seed,
                             std::string_view symbol, const ModelRegistry& registry) {
    if (grid.empty()) raise(ErrorCategory::Config, "grid search needs at least one specification");
    std::optional<GridSearchResult> best;
    std::vector<std::optional<double>> scores;
    std::vector<std::string> failures;
    for (const auto& spec : grid) {
        const auto id = spec.canonical_id();
        try {
            auto model = train(spec, learn_x, learn_y, derive_seed(master_seed, symbol, id), registry);
            const double score = accuracy(model.predict_rows(val_x), val_y);
            scores.push_back(score);
            if (!best || score > best->validation_accuracy) {
                best.emplace(GridSearchResult{spec, std::move(model), score, {}, {}});
            }
        } catch (const Error& e) {
            scores.push_back(std::nullopt);
            failures.push_back(id + ": " + e.what());
        }
    }
    if (!best) {
        std::string message = "every grid entry failed to train";
        for (const auto& failure : failures) message += "; " + failure;
        raise(ErrorCategory::Training, message);
    }
    best->scores = std::move(scores);
    best->failures = std::move(failures);
    return std::move(*best);
}

}  // namespace pairfinder::models
