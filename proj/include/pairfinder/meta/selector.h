#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pairfinder/common/matrix.h"
#include "pairfinder/eval/evaluation.h"
#include "pairfinder/models/classifier.h"

namespace pairfinder::meta {

// Columns of the second-layer input. The backtest and buy-and-hold returns
// are left out: the profit label is computed from them.
inline constexpr std::size_t kMetaFeatureCount = 7;
extern const std::array<const char*, kMetaFeatureCount> kMetaFeatureNames;

std::array<double, kMetaFeatureCount> meta_features(const eval::MetricSet& metrics);

// (instrument x model) rows of metric vectors with their profit labels.
struct MetaDataset {
    Matrix x;
    std::vector<int> y;
    std::vector<std::pair<std::string, std::string>> provenance;
};

MetaDataset build_meta_dataset(std::span<const eval::EvaluationRecord> records);

struct MetaConfig {
    // Hard-voting members; must be an odd count.
    std::vector<models::ClassifierSpec> voters = default_voters();
    std::size_t min_records = 30;

    static std::vector<models::ClassifierSpec> default_voters();
};

// Hard-majority voting ensemble over metric vectors.
class MetaModel {
public:
    explicit MetaModel(std::vector<models::TrainedClassifier> voters) : voters_(std::move(voters)) {}

    std::vector<int> votes(std::span<const double> metrics) const;
    // Majority of votes().
    int predict(std::span<const double> metrics) const;
    // Mean of the voters' scores; used for ranking only.
    double score(std::span<const double> metrics) const;

    const std::vector<models::TrainedClassifier>& voters() const noexcept { return voters_; }
    std::size_t training_rows() const noexcept { return training_rows_; }

private:
    friend MetaModel train_meta(std::span<const eval::EvaluationRecord>, std::uint64_t, const MetaConfig&);

    std::vector<models::TrainedClassifier> voters_;
    std::size_t training_rows_ = 0;
};

// Fits every voter on all of `history` (duplicates count twice). Raises
// InsufficientHistory with fewer than config.min_records records or a single
// profit class; Config for an even voter count.
MetaModel train_meta(std::span<const eval::EvaluationRecord> history, std::uint64_t seed,
                     const MetaConfig& config = {});

enum class SelectionMode { BestSingle, ProfitableList };

std::string_view to_string(SelectionMode mode);
SelectionMode selection_mode_from_string(std::string_view name);

struct SelectionEntry {
    std::string instrument;
    std::string model;
    double meta_score = 0.0;
    int vote = 0;
    double backtest_return_pct = 0.0;

    friend bool operator==(const SelectionEntry&, const SelectionEntry&) = default;
};

struct PairSelection {
    SelectionMode mode = SelectionMode::ProfitableList;
    std::vector<SelectionEntry> entries;

    friend bool operator==(const PairSelection&, const PairSelection&) = default;
};

// Ranking: meta_score descending, then backtest_return_pct descending, then
// instrument, then model id ascending.
// ProfitableList keeps exactly the records voted 1 (possibly none);
// BestSingle is the top-ranked record regardless of its vote.
PairSelection select_pairs(const MetaModel& meta, std::span<const eval::EvaluationRecord> current, SelectionMode mode);

// Expected value of the +1/-1 outcome of a layer that is right with
// probability p2: (+1) * p2 + (-1) * (1 - p2), i.e. 2 * p2 - 1, rounded to 12
// decimals. Raises Domain outside [0, 1].
double mean_system_accuracy(double p2);

}  // namespace pairfinder::meta
