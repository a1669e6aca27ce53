#include "pairfinder/eval/evaluation.h"

#include <algorithm>

#include "pairfinder/common/error.h"
#include "pairfinder/eval/metrics.h"

namespace pairfinder::eval {

std::vector<EquityPoint> equity_curve(std::span<const Date> dates, std::span<const int> predictions,
                                      std::span<const double> returns_pct, bool short_on_down) {
    if (dates.size() != returns_pct.size()) raise(ErrorCategory::Domain, "equity_curve: length mismatch");
    const auto daily = strategy_returns(predictions, returns_pct, short_on_down);
    std::vector<EquityPoint> curve;
    curve.reserve(daily.size());
    double strategy = 1.0;
    double normal = 1.0;
    for (std::size_t i = 0; i < daily.size(); ++i) {
        strategy *= 1.0 + daily[i] / 100.0;
        normal *= 1.0 + returns_pct[i] / 100.0;
        curve.push_back({dates[i], (strategy - 1.0) * 100.0, (normal - 1.0) * 100.0});
    }
    return curve;
}

PairEvaluation evaluate_pair(const models::TrainedClassifier& model, const features::LabeledDataset& dataset,
                             splits::IndexRange window, std::string_view run_id, bool short_on_down) {
    if (window.empty() || window.end > dataset.size()) raise(ErrorCategory::Domain, "evaluation window out of range");
    PairEvaluation out;
    const auto x = dataset.feature_matrix(window.begin, window.size());
    const auto labels = dataset.labels(window.begin, window.size());
    const auto returns = dataset.realized_returns(window.begin, window.size());
    std::vector<Date> dates;
    dates.reserve(window.size());
    for (std::size_t i = window.begin; i < window.end; ++i) dates.push_back(dataset.samples[i].target_date);

    out.scores = model.score_rows(x);
    out.predictions.resize(out.scores.size());
    for (std::size_t i = 0; i < out.scores.size(); ++i) out.predictions[i] = out.scores[i] >= 0.5 ? 1 : 0;
    out.curve = equity_curve(dates, out.predictions, returns, short_on_down);

    const auto positives = std::count(labels.begin(), labels.end(), 1);
    if (positives == 0 || static_cast<std::size_t>(positives) == labels.size()) {
        out.failure = "degenerate window: labels are all one class";
        return out;
    }

    const auto confusion = confusion_metrics(out.predictions, labels);
    EvaluationRecord record;
    record.run_id = std::string(run_id);
    record.instrument = dataset.instrument.symbol();
    record.model = model.spec().canonical_id();
    record.window_start = dates.front();
    record.window_end = dates.back();
    record.metrics.accuracy = confusion.accuracy;
    record.metrics.precision = confusion.precision;
    record.metrics.recall = confusion.recall;
    record.metrics.f1 = confusion.f1;
    record.metrics.normalized_acc = normalized_acc(out.predictions, labels);
    record.metrics.auc = auc(out.scores, labels);
    record.metrics.pred_pos_rate = pred_pos_rate(out.predictions);
    record.metrics.backtest_return_pct = backtest(out.predictions, returns, short_on_down);
    record.metrics.nnp_pct = nnp(returns);
    record.profit_label = record.metrics.backtest_return_pct > 0.0 ? 1 : 0;
    out.record = std::move(record);
    return out;
}

std::string records_csv(std::span<const EvaluationRecord> records) {
    std::string out(kRecordsHeader);
    out += '\n';
    for (const auto& r : records) {
        out += r.instrument;
        out += ',';
        out += r.model;
        const auto& m = r.metrics;
        for (double v : {m.accuracy, m.normalized_acc, m.precision, m.recall, m.f1, m.auc, m.pred_pos_rate,
                         m.backtest_return_pct, m.nnp_pct}) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += std::to_string(r.profit_label);
        out += '\n';
    }
    return out;
}

}  // namespace pairfinder::eval
