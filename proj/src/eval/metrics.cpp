#include "pairfinder/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pairfinder/common/error.h"

namespace pairfinder::eval {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b) raise(ErrorCategory::Domain, std::string(what) + ": length mismatch");
    if (a == 0) raise(ErrorCategory::Domain, std::string(what) + ": empty input");
}

double ratio(double numerator, double denominator) { return denominator == 0.0 ? 0.0 : numerator / denominator; }

struct Counts {
    double tp = 0, fp = 0, tn = 0, fn = 0;
};

Counts count(std::span<const int> predictions, std::span<const int> labels) {
    Counts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predictions[i] == 1) (labels[i] == 1 ? c.tp : c.fp) += 1;
        else (labels[i] == 1 ? c.fn : c.tn) += 1;
    }
    return c;
}

}  // namespace

ConfusionMetrics confusion_metrics(std::span<const int> predictions, std::span<const int> labels) {
    check_lengths(predictions.size(), labels.size(), "confusion_metrics");
    const auto c = count(predictions, labels);
    ConfusionMetrics m;
    m.accuracy = (c.tp + c.tn) / static_cast<double>(labels.size());
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    return m;
}

double normalized_acc(std::span<const int> predictions, std::span<const int> labels) {
    check_lengths(predictions.size(), labels.size(), "normalized_acc");
    const auto c = count(predictions, labels);
    if (c.tp + c.fn == 0 || c.tn + c.fp == 0) raise(ErrorCategory::Domain, "normalized_acc needs both classes in labels");
    return 0.5 * (c.tp / (c.tp + c.fn) + c.tn / (c.tn + c.fp));
}

double pred_pos_rate(std::span<const int> predictions) {
    if (predictions.empty()) raise(ErrorCategory::Domain, "pred_pos_rate: empty input");
    const auto positives = std::count(predictions.begin(), predictions.end(), 1);
    return static_cast<double>(positives) / static_cast<double>(predictions.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    check_lengths(scores.size(), labels.size(), "auc");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positives = 0.0;
    double positive_rank_sum = 0.0;
    for (std::size_t start = 0; start < n;) {
        std::size_t stop = start + 1;
        while (stop < n && scores[order[stop]] == scores[order[start]]) ++stop;
        // 1-based mid-rank of the tie group [start, stop).
        const double mid_rank = 0.5 * static_cast<double>(start + 1 + stop);
        for (std::size_t k = start; k < stop; ++k) {
            if (labels[order[k]] == 1) {
                positives += 1.0;
                positive_rank_sum += mid_rank;
            }
        }
        start = stop;
    }
    const double negatives = static_cast<double>(n) - positives;
    if (positives == 0.0 || negatives == 0.0) raise(ErrorCategory::Domain, "auc needs both classes in labels");
    return (positive_rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

std::vector<double> strategy_returns(std::span<const int> predictions, std::span<const double> returns_pct,
                                     bool short_on_down) {
    if (predictions.size() != returns_pct.size()) raise(ErrorCategory::Domain, "backtest: length mismatch");
    std::vector<double> out(returns_pct.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (predictions[i] == 1) out[i] = returns_pct[i];
        else out[i] = short_on_down ? -returns_pct[i] : 0.0;
    }
    return out;
}

double compound_pct(std::span<const double> returns_pct) {
    double growth = 1.0;
    for (double r : returns_pct) {
        if (!(std::abs(r) < 100.0)) raise(ErrorCategory::Domain, "daily return magnitude must be below 100%");
        growth *= 1.0 + r / 100.0;
    }
    return (growth - 1.0) * 100.0;
}

double backtest(std::span<const int> predictions, std::span<const double> returns_pct, bool short_on_down) {
    return compound_pct(strategy_returns(predictions, returns_pct, short_on_down));
}

double nnp(std::span<const double> returns_pct) {
    if (returns_pct.empty()) raise(ErrorCategory::Domain, "nnp: empty input");
    return compound_pct(returns_pct);
}

}  // namespace pairfinder::eval
