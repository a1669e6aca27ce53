#include "pairfinder/models/tree.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pairfinder::models {

double Tree::evaluate(std::span<const double> x) const {
    int index = 0;
    while (nodes_[index].feature >= 0) {
        const auto& node = nodes_[index];
        index = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[index].value;
}

std::size_t Tree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [index, depth] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, depth);
        if (nodes_[index].feature >= 0) {
            stack.emplace_back(nodes_[index].left, depth + 1);
            stack.emplace_back(nodes_[index].right, depth + 1);
        }
    }
    return deepest;
}

namespace {

struct GiniPolicy {
    std::span<const int> y;

    struct Stats {
        double n = 0.0;
        double positive = 0.0;
    };

    void add(Stats& s, std::size_t row) const {
        s.n += 1.0;
        s.positive += y[row];
    }
    // n * gini impurity; additive over children.
    static double cost(const Stats& s) {
        if (s.n == 0.0) return 0.0;
        const double negative = s.n - s.positive;
        return s.n - (s.positive * s.positive + negative * negative) / s.n;
    }
    bool pure(std::span<const std::size_t> rows) const {
        for (auto r : rows) {
            if (y[r] != y[rows.front()]) return false;
        }
        return true;
    }
    double leaf(std::span<const std::size_t> rows) const {
        Stats s;
        for (auto r : rows) add(s, r);
        return s.positive / s.n;
    }
};

struct SquaredErrorPolicy {
    std::span<const double> gradient;
    std::span<const double> hessian;

    struct Stats {
        double n = 0.0;
        double sum = 0.0;
    };

    void add(Stats& s, std::size_t row) const {
        s.n += 1.0;
        s.sum += gradient[row];
    }
    // Sum of squared errors minus the (split-invariant) sum of squares.
    static double cost(const Stats& s) { return s.n == 0.0 ? 0.0 : -(s.sum * s.sum) / s.n; }
    bool pure(std::span<const std::size_t> rows) const {
        for (auto r : rows) {
            if (gradient[r] != gradient[rows.front()]) return false;
        }
        return true;
    }
    double leaf(std::span<const std::size_t> rows) const {
        double g = 0.0;
        double h = 0.0;
        for (auto r : rows) {
            g += gradient[r];
            h += hessian[r];
        }
        return std::abs(h) < 1e-150 ? 0.0 : g / h;
    }
};

}  // namespace

template <typename Policy>
class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, Policy policy, const TreeParams& params, Rng* rng)
        : x_(x), policy_(policy), params_(params), rng_(rng) {
        features_.resize(x.cols());
        std::iota(features_.begin(), features_.end(), std::size_t{0});
    }

    Tree build(std::vector<std::size_t> rows) {
        Tree tree;
        rows_ = std::move(rows);
        grow(tree, 0, rows_.size(), 0);
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double cost = std::numeric_limits<double>::infinity();
    };

    int grow(Tree& tree, std::size_t begin, std::size_t end, std::size_t depth) {
        const int index = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        const std::span<const std::size_t> rows(rows_.data() + begin, end - begin);
        const std::size_t n = end - begin;

        Split split;
        if (depth < params_.max_depth && n >= params_.min_samples_split && n >= 2 * params_.min_samples_leaf &&
            !policy_.pure(rows)) {
            split = best_split(rows);
        }
        if (split.feature < 0) {
            tree.nodes_[index].value = policy_.leaf(rows);
            return index;
        }

        const auto middle = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                                  rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t r) {
                                                      return x_(r, static_cast<std::size_t>(split.feature)) <=
                                                             split.threshold;
                                                  });
        const auto mid = static_cast<std::size_t>(middle - rows_.begin());
        tree.nodes_[index].feature = split.feature;
        tree.nodes_[index].threshold = split.threshold;
        const int left = grow(tree, begin, mid, depth + 1);
        const int right = grow(tree, mid, end, depth + 1);
        tree.nodes_[index].left = left;
        tree.nodes_[index].right = right;
        return index;
    }

    Split best_split(std::span<const std::size_t> rows) {
        std::size_t candidates = features_.size();
        if (params_.max_features > 0 && params_.max_features < features_.size() && rng_ != nullptr) {
            rng_->shuffle(features_);
            candidates = params_.max_features;
        }

        Split best;
        const std::size_t n = rows.size();
        std::vector<std::pair<double, std::size_t>> sorted(n);
        typename Policy::Stats total;
        for (auto r : rows) policy_.add(total, r);

        for (std::size_t c = 0; c < candidates; ++c) {
            const std::size_t feature = features_[c];
            for (std::size_t i = 0; i < n; ++i) sorted[i] = {x_(rows[i], feature), rows[i]};
            std::sort(sorted.begin(), sorted.end());

            typename Policy::Stats left;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                policy_.add(left, sorted[i].second);
                if (sorted[i].first == sorted[i + 1].first) continue;
                const std::size_t n_left = i + 1;
                if (n_left < params_.min_samples_leaf || n - n_left < params_.min_samples_leaf) continue;
                typename Policy::Stats right;
                right.n = total.n - left.n;
                if constexpr (std::is_same_v<Policy, GiniPolicy>) {
                    right.positive = total.positive - left.positive;
                } else {
                    right.sum = total.sum - left.sum;
                }
                const double cost = Policy::cost(left) + Policy::cost(right);
                if (cost < best.cost) {
                    double threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
                    if (!(threshold < sorted[i + 1].first)) threshold = sorted[i].first;
                    best = {static_cast<int>(feature), threshold, cost};
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    Policy policy_;
    TreeParams params_;
    Rng* rng_;
    std::vector<std::size_t> features_;
    std::vector<std::size_t> rows_;
};

Tree Tree::fit_classifier(const Matrix& x, std::span<const int> y, std::vector<std::size_t> rows,
                          const TreeParams& params, Rng* feature_rng) {
    return TreeBuilder<GiniPolicy>(x, GiniPolicy{y}, params, feature_rng).build(std::move(rows));
}

Tree Tree::fit_regressor(const Matrix& x, std::span<const double> gradient, std::span<const double> hessian,
                         std::vector<std::size_t> rows, const TreeParams& params) {
    return TreeBuilder<SquaredErrorPolicy>(x, SquaredErrorPolicy{gradient, hessian}, params, nullptr)
        .build(std::move(rows));
}

double RandomForestModel::score(std::span<const double> x) const {
    std::size_t votes = 0;
    for (const auto& tree : trees_) votes += tree.evaluate(x) >= 0.5 ? 1 : 0;
    return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

double GradientBoostingModel::margin(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.evaluate(x);
    return initial_ + learning_rate_ * sum;
}

namespace {

TreeParams tree_params(const Hyperparameters& params) {
    TreeParams out;
    out.max_depth = count_param(params, "max_depth");
    out.min_samples_split = count_param(params, "min_samples_split");
    out.min_samples_leaf = count_param(params, "min_samples_leaf");
    return out;
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

}  // namespace

std::unique_ptr<Model> fit_decision_tree(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                         std::uint64_t) {
    return std::make_unique<DecisionTreeModel>(Tree::fit_classifier(x, y, all_rows(x.rows()), tree_params(params)));
}

std::unique_ptr<Model> fit_random_forest(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                         std::uint64_t seed) {
    auto tp = tree_params(params);
    tp.max_features = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols()))));
    const std::size_t n_trees = count_param(params, "n_estimators");
    const std::size_t n = x.rows();
    std::vector<Tree> trees;
    trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        Rng rng(sub_seed(seed, t));
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = rng.index(n);
        trees.push_back(Tree::fit_classifier(x, y, std::move(rows), tp, &rng));
    }
    return std::make_unique<RandomForestModel>(std::move(trees));
}

std::unique_ptr<Model> fit_gradient_boosting(const Hyperparameters& params, const Matrix& x, std::span<const int> y,
                                             std::uint64_t) {
    const auto tp = tree_params(params);
    const std::size_t n_trees = count_param(params, "n_estimators");
    const double learning_rate = param(params, "learning_rate");
    const std::size_t n = x.rows();

    double positive = 0.0;
    for (int label : y) positive += label;
    const double prior = std::clamp(positive / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    const double initial = std::log(prior / (1.0 - prior));

    std::vector<double> margin(n, initial);
    std::vector<double> gradient(n);
    std::vector<double> hessian(n);
    std::vector<Tree> trees;
    trees.reserve(n_trees);
    for (std::size_t m = 0; m < n_trees; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(margin[i]);
            gradient[i] = y[i] - p;
            hessian[i] = p * (1.0 - p);
        }
        Tree tree = Tree::fit_regressor(x, gradient, hessian, all_rows(n), tp);
        for (std::size_t i = 0; i < n; ++i) margin[i] += learning_rate * tree.evaluate(x.row(i));
        trees.push_back(std::move(tree));
    }
    return std::make_unique<GradientBoostingModel>(initial, learning_rate, std::move(trees));
}

}  // namespace pairfinder::models
