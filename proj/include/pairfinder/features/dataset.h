#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "pairfinder/common/matrix.h"
#include "pairfinder/data/ohlcv.h"
#include "pairfinder/features/indicators.h"

namespace pairfinder::features {

struct DatasetParams {
    std::size_t sma_period = 14;
    std::size_t rsi_period = 14;
    MacdPeriods macd{};
};

// Raises Config when a period is zero or the MACD periods are not fast < slow.
void validate(const DatasetParams& params);

inline constexpr std::size_t kFeatureCount = 6;

struct FeatureVector {
    double return_pct = 0.0;
    double sma = 0.0;
    double rsi = 0.0;
    double macd_line = 0.0;
    double signal_line = 0.0;
    double histogram = 0.0;

    std::array<double, kFeatureCount> as_array() const {
        return {return_pct, sma, rsi, macd_line, signal_line, histogram};
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

extern const std::array<const char*, kFeatureCount> kFeatureNames;

// Features are the indicator values of the trading day before `target_date`;
// label is 1 iff the open-to-close return of `target_date` is strictly
// positive. `realized_return_pct` is that return, kept for backtesting.
struct LabeledSample {
    Date target_date;
    FeatureVector features;
    int label = 0;
    double realized_return_pct = 0.0;

    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct LabeledDataset {
    data::InstrumentId instrument;
    std::vector<LabeledSample> samples;

    std::size_t size() const noexcept { return samples.size(); }

    // Feature matrix / labels / realized returns for samples [first, first+count).
    Matrix feature_matrix(std::size_t first, std::size_t count) const;
    std::vector<int> labels(std::size_t first, std::size_t count) const;
    std::vector<double> realized_returns(std::size_t first, std::size_t count) const;
};

// Bar index of the first target day; every feature is defined the day before.
std::size_t warmup(const DatasetParams& params);

// Bars needed to emit `min_samples` samples.
inline std::size_t minimum_bars(const DatasetParams& params, std::size_t min_samples) {
    return warmup(params) + min_samples;
}

// Raises Validation naming the required minimum when the series cannot yield
// a single sample.
LabeledDataset build_dataset(const data::PriceSeries& series, const DatasetParams& params = {});

// Feature vector built from the last bar; the input for predicting the day
// after the series ends.
FeatureVector latest_features(const data::PriceSeries& series, const DatasetParams& params = {});

// target_date,return_pct,sma,rsi,macd,signal,histogram,label
std::string feature_frame_csv(const LabeledDataset& dataset);

}  // namespace pairfinder::features
