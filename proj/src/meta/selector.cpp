#include "pairfinder/meta/selector.h"

#include <algorithm>
#include <cmath>

#include "pairfinder/common/error.h"
#include "pairfinder/common/random.h"

namespace pairfinder::meta {

const std::array<const char*, kMetaFeatureCount> kMetaFeatureNames = {
    "accuracy", "normalized_acc", "precision", "recall", "f1", "auc", "pred_pos_rate"};

std::array<double, kMetaFeatureCount> meta_features(const eval::MetricSet& m) {
    return {m.accuracy, m.normalized_acc, m.precision, m.recall, m.f1, m.auc, m.pred_pos_rate};
}

MetaDataset build_meta_dataset(std::span<const eval::EvaluationRecord> records) {
    MetaDataset out;
    out.x = Matrix(0, kMetaFeatureCount);
    for (const auto& record : records) {
        const auto row = meta_features(record.metrics);
        out.x.append_row(row);
        out.y.push_back(record.profit_label);
        out.provenance.emplace_back(record.instrument, record.model);
    }
    return out;
}

std::vector<models::ClassifierSpec> MetaConfig::default_voters() {
    return {models::make_spec("LogisticRegression"), models::make_spec("DecisionTree"),
            models::make_spec("KNeighbors")};
}

std::vector<int> MetaModel::votes(std::span<const double> metrics) const {
    std::vector<int> out;
    out.reserve(voters_.size());
    for (const auto& voter : voters_) out.push_back(voter.predict(metrics));
    return out;
}

int MetaModel::predict(std::span<const double> metrics) const {
    const auto v = votes(metrics);
    const auto ones = std::count(v.begin(), v.end(), 1);
    return 2 * static_cast<std::size_t>(ones) > v.size() ? 1 : 0;
}

double MetaModel::score(std::span<const double> metrics) const {
    double total = 0.0;
    for (const auto& voter : voters_) total += voter.score(metrics);
    return total / static_cast<double>(voters_.size());
}

MetaModel train_meta(std::span<const eval::EvaluationRecord> history, std::uint64_t seed, const MetaConfig& config) {
    if (config.voters.empty() || config.voters.size() % 2 == 0) {
        raise(ErrorCategory::Config, "the meta ensemble needs an odd number of voters");
    }
    if (history.size() < config.min_records) {
        raise(ErrorCategory::InsufficientHistory, "insufficient meta history: " + std::to_string(history.size()) +
                                                      " records, need " + std::to_string(config.min_records));
    }
    const auto data = build_meta_dataset(history);
    const auto positives = std::count(data.y.begin(), data.y.end(), 1);
    if (positives == 0 || static_cast<std::size_t>(positives) == data.y.size()) {
        raise(ErrorCategory::InsufficientHistory, "insufficient meta history: every record has the same profit label");
    }
    std::vector<models::TrainedClassifier> voters;
    for (const auto& spec : config.voters) {
        voters.push_back(models::train(spec, data.x, data.y, derive_seed(seed, "meta", spec.canonical_id())));
    }
    MetaModel model(std::move(voters));
    model.training_rows_ = history.size();
    return model;
}

std::string_view to_string(SelectionMode mode) {
    return mode == SelectionMode::BestSingle ? "BestSingle" : "ProfitableList";
}

SelectionMode selection_mode_from_string(std::string_view name) {
    if (name == "BestSingle") return SelectionMode::BestSingle;
    if (name == "ProfitableList") return SelectionMode::ProfitableList;
    raise(ErrorCategory::Config, "unknown selection mode '" + std::string(name) + "'");
}

PairSelection select_pairs(const MetaModel& meta, std::span<const eval::EvaluationRecord> current, SelectionMode mode) {
    if (current.empty()) raise(ErrorCategory::Domain, "select_pairs needs at least one record");
    std::vector<SelectionEntry> ranked;
    ranked.reserve(current.size());
    for (const auto& record : current) {
        const auto features = meta_features(record.metrics);
        ranked.push_back({record.instrument, record.model, meta.score(features), meta.predict(features),
                          record.metrics.backtest_return_pct});
    }
    std::sort(ranked.begin(), ranked.end(), [](const SelectionEntry& a, const SelectionEntry& b) {
        if (a.meta_score != b.meta_score) return a.meta_score > b.meta_score;
        if (a.backtest_return_pct != b.backtest_return_pct) return a.backtest_return_pct > b.backtest_return_pct;
        if (a.instrument != b.instrument) return a.instrument < b.instrument;
        return a.model < b.model;
    });

    PairSelection selection{mode, {}};
    if (mode == SelectionMode::BestSingle) {
        selection.entries.push_back(ranked.front());
    } else {
        for (auto& entry : ranked) {
            if (entry.vote == 1) selection.entries.push_back(std::move(entry));
        }
    }
    return selection;
}

double mean_system_accuracy(double p2) {
    if (!(p2 >= 0.0 && p2 <= 1.0)) raise(ErrorCategory::Domain, "layer accuracy must lie in [0, 1]");
    const double expectation = (+1.0) * p2 + (-1.0) * (1.0 - p2);
    // Snap to 12 decimals: 0.8 is stored as 0.80000000000000004, which would
    // otherwise surface as 0.6000000000000001.
    return std::round(expectation * 1e12) / 1e12;
}

}  // namespace pairfinder::meta
