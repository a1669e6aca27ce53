#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairfinder/common/matrix.h"

namespace pairfinder::models {

// Named numeric hyperparameters. Ordered so canonical ids are stable.
using Hyperparameters = std::map<std::string, double>;

double param(const Hyperparameters& params, const std::string& name);
std::size_t count_param(const Hyperparameters& params, const std::string& name);

struct ClassifierSpec {
    std::string kind;
    Hyperparameters params;

    // "Kind{a=1;b=0.5}": every hyperparameter, sorted by name, shortest
    // round-trip numbers. Contains no commas so it can sit in a CSV field.
    std::string canonical_id() const;

    friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

// Fitted predictor operating on already-preprocessed inputs.
class Model {
public:
    virtual ~Model() = default;
    // Probability-like confidence that the class is 1, in [0, 1].
    virtual double score(std::span<const double> x) const = 0;
};

// Per-feature mean / standard deviation captured from the learn set.
// Constant columns get a unit scale.
class Standardizer {
public:
    static Standardizer fit(const Matrix& x);
    std::vector<double> apply(std::span<const double> x) const;
    Matrix apply(const Matrix& x) const;

    const std::vector<double>& means() const noexcept { return means_; }
    const std::vector<double>& scales() const noexcept { return scales_; }

private:
    std::vector<double> means_;
    std::vector<double> scales_;
};

class TrainedClassifier {
public:
    TrainedClassifier(ClassifierSpec spec, std::optional<Standardizer> scaler, std::shared_ptr<const Model> model,
                      std::size_t n_features)
        : spec_(std::move(spec)), scaler_(std::move(scaler)), model_(std::move(model)), n_features_(n_features) {}

    const ClassifierSpec& spec() const noexcept { return spec_; }
    const Model& model() const noexcept { return *model_; }
    const std::optional<Standardizer>& scaler() const noexcept { return scaler_; }
    std::size_t n_features() const noexcept { return n_features_; }

    // Raises Domain for a wrong-sized or non-finite input.
    double score(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return score(x) >= 0.5 ? 1 : 0; }

    std::vector<double> score_rows(const Matrix& x) const;
    std::vector<int> predict_rows(const Matrix& x) const;

private:
    ClassifierSpec spec_;
    std::optional<Standardizer> scaler_;
    std::shared_ptr<const Model> model_;
    std::size_t n_features_ = 0;
};

struct ParamRange {
    double min = 0.0;
    double max = 0.0;
    bool integer = false;
    // Lower bound excluded (e.g. C > 0).
    bool exclusive_min = false;
};

using FitFn = std::function<std::unique_ptr<Model>(const Hyperparameters&, const Matrix&, std::span<const int>,
                                                   std::uint64_t seed)>;

// Everything the zoo needs to know about one model kind.
struct ModelKindInfo {
    std::string name;
    Hyperparameters defaults;
    std::map<std::string, ParamRange> ranges;
    std::map<std::string, std::vector<double>> default_grid;
    bool standardize = false;
    FitFn fit;
};

// Model kinds by name. builtin() holds the nine standard kinds; further kinds
// can be registered at startup.
class ModelRegistry {
public:
    static ModelRegistry& builtin();

    void add(ModelKindInfo info);
    bool contains(std::string_view name) const;
    const ModelKindInfo& get(std::string_view name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, ModelKindInfo, std::less<>> kinds_;
};

// The kind's default spec with `overrides` applied. Raises Config for an
// unknown kind, unknown hyperparameter, or out-of-range value.
ClassifierSpec make_spec(std::string_view kind, const Hyperparameters& overrides = {},
                         const ModelRegistry& registry = ModelRegistry::builtin());

// Fits `spec` on (x, y). Raises Training for an empty or single-class learn
// set ("degenerate labels") and for non-finite features. Deterministic in
// (spec, x, y, seed).
TrainedClassifier train(const ClassifierSpec& spec, const Matrix& x, std::span<const int> y, std::uint64_t seed,
                        const ModelRegistry& registry = ModelRegistry::builtin());

using GridAxes = std::map<std::string, std::vector<double>>;

// Cartesian product of `axes` over the kind's defaults, first axis (by name)
// varying slowest. The default spec is appended if the product misses it.
std::vector<ClassifierSpec> make_grid(std::string_view kind, const GridAxes& axes,
                                      const ModelRegistry& registry = ModelRegistry::builtin());
std::vector<ClassifierSpec> default_grid(std::string_view kind,
                                         const ModelRegistry& registry = ModelRegistry::builtin());

double accuracy(std::span<const int> predictions, std::span<const int> labels);

struct GridSearchResult {
    ClassifierSpec best;
    TrainedClassifier model;
    double validation_accuracy = 0.0;
    // Validation accuracy per grid entry; nullopt where training failed.
    std::vector<std::optional<double>> scores;
    std::vector<std::string> failures;
};

// Trains every grid entry on the learn set with seed
// derive_seed(master_seed, symbol, entry.canonical_id()), keeps the one with
// the highest validation accuracy (earliest wins ties). Raises Training
// listing every failure when no entry trains.
GridSearchResult grid_search(const std::vector<ClassifierSpec>& grid, const Matrix& learn_x, std::span<const int> learn_y,
                             const Matrix& val_x, std::span<const int> val_y, std::uint64_t master_seed,
                             std::string_view symbol, const ModelRegistry& registry = ModelRegistry::builtin());

inline double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace pairfinder::models
