#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairfinder/common/text.h"
#include "pairfinder/features/dataset.h"
#include "pairfinder/models/classifier.h"
#include "pairfinder/splits/split.h"

namespace pairfinder::eval {

struct MetricSet {
    double accuracy = 0.0;
    double normalized_acc = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    double pred_pos_rate = 0.0;
    double backtest_return_pct = 0.0;
    double nnp_pct = 0.0;

    friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

// One instrument-model pair scored over one window.
struct EvaluationRecord {
    std::string run_id;
    std::string instrument;
    std::string model;
    Date window_start;
    Date window_end;
    MetricSet metrics;
    // 1 iff backtest_return_pct > 0.
    int profit_label = 0;

    friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

struct EquityPoint {
    Date date;
    double strategy_cum_pct = 0.0;
    double normal_cum_pct = 0.0;

    friend bool operator==(const EquityPoint&, const EquityPoint&) = default;
};

// Cumulative compounded strategy and buy-and-hold returns after each day.
std::vector<EquityPoint> equity_curve(std::span<const Date> dates, std::span<const int> predictions,
                                      std::span<const double> returns_pct, bool short_on_down = true);

struct PairEvaluation {
    // Empty when the window could not be scored; `failure` says why.
    std::optional<EvaluationRecord> record;
    std::string failure;
    std::vector<int> predictions;
    std::vector<double> scores;
    std::vector<EquityPoint> curve;
};

// Scores `model` over dataset samples in `window`. A window whose labels are
// all one class yields a failed evaluation rather than an exception.
PairEvaluation evaluate_pair(const models::TrainedClassifier& model, const features::LabeledDataset& dataset,
                             splits::IndexRange window, std::string_view run_id, bool short_on_down = true);

// dataset,model,accuracy,normalized_acc,precision,recall,f1,auc,pred_pos_rate,backtest_return_pct,nnp_pct,profit_label
inline constexpr std::string_view kRecordsHeader =
    "dataset,model,accuracy,normalized_acc,precision,recall,f1,auc,pred_pos_rate,backtest_return_pct,nnp_pct,"
    "profit_label";

std::string records_csv(std::span<const EvaluationRecord> records);

}  // namespace pairfinder::eval
