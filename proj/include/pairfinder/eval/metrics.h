#pragma once

#include <span>
#include <vector>

namespace pairfinder::eval {

// Class 1 is the positive class. Vanishing denominators give 0.
struct ConfusionMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Raises Domain on length mismatch or empty input.
ConfusionMetrics confusion_metrics(std::span<const int> predictions, std::span<const int> labels);

// Balanced accuracy: mean of the class-1 and class-0 recalls. Raises Domain
// unless both classes occur in `labels`.
double normalized_acc(std::span<const int> predictions, std::span<const int> labels);

// Fraction of predictions equal to 1.
double pred_pos_rate(std::span<const int> predictions);

// Mann-Whitney AUC with tied scores counted as one half; computed from
// mid-ranks in O(n log n). Raises Domain unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

// Daily position returns in percent: +r on a 1-prediction; on a 0-prediction
// -r when shorting, otherwise 0 (flat).
std::vector<double> strategy_returns(std::span<const int> predictions, std::span<const double> returns_pct,
                                     bool short_on_down = true);

// (prod(1 + r/100) - 1) * 100. Raises Domain for any |r| >= 100.
double compound_pct(std::span<const double> returns_pct);

double backtest(std::span<const int> predictions, std::span<const double> returns_pct, bool short_on_down = true);

// Always-long baseline over the same returns.
double nnp(std::span<const double> returns_pct);

}  // namespace pairfinder::eval
