#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairfinder/common/matrix.h"
#include "pairfinder/common/random.h"
#include "pairfinder/models/classifier.h"

namespace pairfinder::models {

struct TreeParams {
    std::size_t max_depth = 12;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    // Features examined per split; 0 means all.
    std::size_t max_features = 0;
};

struct TreeNode {
    // -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

// Binary CART tree; inputs with x[feature] <= threshold go left.
class Tree {
public:
    double evaluate(std::span<const double> x) const;
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;

    // Gini splits; leaves hold the class-1 fraction of their rows. `rows` may
    // repeat indices (bootstrap samples). `feature_rng` is only consulted
    // when params.max_features restricts the candidates.
    static Tree fit_classifier(const Matrix& x, std::span<const int> y, std::vector<std::size_t> rows,
                               const TreeParams& params, Rng* feature_rng = nullptr);

    // Squared-error splits on `gradient`; leaves hold the Newton step
    // sum(gradient) / sum(hessian).
    static Tree fit_regressor(const Matrix& x, std::span<const double> gradient, std::span<const double> hessian,
                              std::vector<std::size_t> rows, const TreeParams& params);

private:
    template <typename Policy>
    friend class TreeBuilder;

    std::vector<TreeNode> nodes_;
};

class DecisionTreeModel final : public Model {
public:
    explicit DecisionTreeModel(Tree tree) : tree_(std::move(tree)) {}
    double score(std::span<const double> x) const override { return tree_.evaluate(x); }
    const Tree& tree() const noexcept { return tree_; }

private:
    Tree tree_;
};

// Bagged CART trees with sqrt(d) candidate features per split. The score is
// the fraction of trees voting 1, so predict() is the majority vote.
class RandomForestModel final : public Model {
public:
    explicit RandomForestModel(std::vector<Tree> trees) : trees_(std::move(trees)) {}
    double score(std::span<const double> x) const override;
    const std::vector<Tree>& trees() const noexcept { return trees_; }

private:
    std::vector<Tree> trees_;
};

// Additive regression trees fitted to logistic-loss gradients. The score is
// sigmoid(initial + learning_rate * sum of tree outputs).
class GradientBoostingModel final : public Model {
public:
    GradientBoostingModel(double initial, double learning_rate, std::vector<Tree> trees)
        : initial_(initial), learning_rate_(learning_rate), trees_(std::move(trees)) {}

    double margin(std::span<const double> x) const;
    double score(std::span<const double> x) const override { return sigmoid(margin(x)); }

    double initial() const noexcept { return initial_; }
    double learning_rate() const noexcept { return learning_rate_; }
    const std::vector<Tree>& trees() const noexcept { return trees_; }

private:
    double initial_;
    double learning_rate_;
    std::vector<Tree> trees_;
};

std::unique_ptr<Model> fit_decision_tree(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                         std::uint64_t seed);
std::unique_ptr<Model> fit_random_forest(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                         std::uint64_t seed);
std::unique_ptr<Model> fit_gradient_boosting(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                             std::uint64_t seed);

}  // namespace pairfinder::models
