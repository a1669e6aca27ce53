#include "pairfinder/features/dataset.h"

#include <algorithm>

#include "pairfinder/common/error.h"

namespace pairfinder::features {

const std::array<const char*, kFeatureCount> kFeatureNames = {"return_pct", "sma",    "rsi",
                                                              "macd",       "signal", "histogram"};

void validate(const DatasetParams& params) {
    if (params.sma_period == 0 || params.rsi_period == 0) raise(ErrorCategory::Config, "indicator periods must be >= 1");
    if (params.macd.fast == 0 || params.macd.signal == 0 || params.macd.fast >= params.macd.slow) {
        raise(ErrorCategory::Config, "MACD needs 0 < fast < slow and signal > 0");
    }
}

std::size_t warmup(const DatasetParams& params) {
    const std::size_t last_undefined =
        std::max({params.sma_period - 1, params.rsi_period, params.macd.slow + params.macd.signal - 2});
    return last_undefined + 1;
}

Matrix LabeledDataset::feature_matrix(std::size_t first, std::size_t count) const {
    Matrix out(count, kFeatureCount);
    for (std::size_t i = 0; i < count; ++i) {
        const auto values = samples[first + i].features.as_array();
        std::copy(values.begin(), values.end(), out.row(i).begin());
    }
    return out;
}

std::vector<int> LabeledDataset::labels(std::size_t first, std::size_t count) const {
    std::vector<int> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = samples[first + i].label;
    return out;
}

std::vector<double> LabeledDataset::realized_returns(std::size_t first, std::size_t count) const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = samples[first + i].realized_return_pct;
    return out;
}

namespace {

struct IndicatorFrame {
    std::vector<double> returns;
    std::vector<double> sma;
    std::vector<double> rsi;
    MacdSeries macd;

    // Features computed from bars [0, index].
    FeatureVector at(std::size_t index, const DatasetParams& params) const {
        FeatureVector f;
        f.return_pct = returns[index];
        f.sma = sma[index - (params.sma_period - 1)];
        f.rsi = rsi[index - params.rsi_period];
        const std::size_t s = index - macd.signal_offset;
        f.macd_line = macd.line_at_signal(s);
        f.signal_line = macd.signal[s];
        f.histogram = macd.histogram[s];
        return f;
    }
};

IndicatorFrame compute_frame(const data::PriceSeries& series, const DatasetParams& params) {
    IndicatorFrame frame;
    std::vector<double> closes;
    closes.reserve(series.size());
    frame.returns.reserve(series.size());
    for (const auto& bar : series.bars()) {
        closes.push_back(bar.close);
        frame.returns.push_back(compute_return(bar.open, bar.close));
    }
    frame.sma = sma(closes, params.sma_period);
    frame.rsi = rsi(closes, params.rsi_period);
    frame.macd = macd(closes, params.macd);
    return frame;
}

}  // namespace

LabeledDataset build_dataset(const data::PriceSeries& series, const DatasetParams& params) {
    validate(params);
    const std::size_t first_target = warmup(params);
    if (series.size() <= first_target) {
        raise(ErrorCategory::Validation, series.instrument().symbol() + ": " + std::to_string(series.size()) +
                                             " bars, need at least " + std::to_string(first_target + 1) +
                                             " to build one sample");
    }
    const auto frame = compute_frame(series, params);
    LabeledDataset dataset{series.instrument(), {}};
    dataset.samples.reserve(series.size() - first_target);
    for (std::size_t t = first_target; t < series.size(); ++t) {
        LabeledSample sample;
        sample.target_date = series.bars()[t].date;
        sample.features = frame.at(t - 1, params);
        sample.realized_return_pct = frame.returns[t];
        sample.label = sample.realized_return_pct > 0.0 ? 1 : 0;
        dataset.samples.push_back(sample);
    }
    return dataset;
}

FeatureVector latest_features(const data::PriceSeries& series, const DatasetParams& params) {
    validate(params);
    if (series.size() < warmup(params)) {
        raise(ErrorCategory::Validation, series.instrument().symbol() + ": need at least " +
                                             std::to_string(warmup(params)) + " bars for features");
    }
    return compute_frame(series, params).at(series.size() - 1, params);
}

std::string feature_frame_csv(const LabeledDataset& dataset) {
    std::string out = "target_date,return_pct,sma,rsi,macd,signal,histogram,label\n";
    for (const auto& sample : dataset.samples) {
        out += format_date(sample.target_date);
        for (double value : sample.features.as_array()) {
            out += ',';
            out += format_double(value);
        }
        out += ',';
        out += std::to_string(sample.label);
        out += '\n';
    }
    return out;
}

}  // namespace pairfinder::features
