#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "oracles.h"
#include "pairfinder/common/error.h"
#include "pairfinder/data/synthetic.h"
#include "pairfinder/features/dataset.h"
#include "pairfinder/features/indicators.h"

using namespace pairfinder;
using namespace pairfinder::features;

namespace {

// Bars from (open, close) pairs on consecutive calendar days.
data::PriceSeries series_from(const std::vector<std::pair<double, double>>& oc) {
    std::vector<data::OhlcvBar> bars;
    auto day = std::chrono::sys_days(Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{1}});
    for (const auto& [open, close] : oc) {
        bars.push_back({Date(day), open, std::max(open, close) * 1.01, std::min(open, close) * 0.99, close, close, 100});
        day += std::chrono::days{1};
    }
    return data::PriceSeries::validated(data::InstrumentId("T"), bars);
}

}  // namespace

TEST(Return, Examples) {
    EXPECT_NEAR(compute_return(1199.800049, 1205.099976), 0.441735, 1e-6);
    EXPECT_EQ(compute_return(50.0, 50.0), 0.0);
    EXPECT_EQ(compute_return(100.0, 90.0), -10.0);
    EXPECT_THROW(compute_return(0.0, 1.0), Error);
}

TEST(Sma, Examples) {
    const std::vector<double> v{1, 2, 3, 4};
    EXPECT_EQ(sma(v, 2), (std::vector<double>{1.5, 2.5, 3.5}));
    EXPECT_EQ(sma(v, 1), v);
    const std::vector<double> c(30, 7.25);
    for (double x : sma(c, 14)) EXPECT_EQ(x, 7.25);
    EXPECT_TRUE(sma(v, 5).empty());
}

TEST(Ema, Examples) {
    const std::vector<double> v{1, 2, 3};
    const auto e = ema(v, 2);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_DOUBLE_EQ(e[0], 1.5);
    EXPECT_DOUBLE_EQ(e[1], 2.5);
    EXPECT_EQ(ema(v, 1), v);
    const std::vector<double> c(40, 3.0);
    for (double x : ema(c, 9)) EXPECT_DOUBLE_EQ(x, 3.0);
}

TEST(Rsi, MonotoneSeries) {
    std::vector<double> up, down;
    for (int i = 0; i < 40; ++i) {
        up.push_back(10.0 + i);
        down.push_back(100.0 - i);
    }
    for (double x : rsi(up, 14)) EXPECT_EQ(x, 100.0);
    for (double x : rsi(down, 14)) EXPECT_EQ(x, 0.0);
    const std::vector<double> flat(30, 5.0);
    for (double x : rsi(flat, 14)) EXPECT_EQ(x, 50.0);
}

TEST(Rsi, ClassicFifteenPointSeries) {
    const std::vector<double> v{44,    44.34, 44.09, 44.15, 43.61, 44.33, 44.83, 45.10,
                                45.42, 45.84, 46.08, 45.89, 46.03, 45.61, 46.28};
    const auto r = rsi(v, 14);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], oracle::rsi_at(v, 14, 14), 1e-12);
    // Hand check: gains sum to 3.68, losses to 1.40.
    EXPECT_NEAR(r[0], 100.0 - 100.0 / (1.0 + 3.68 / 1.40), 1e-9);
    EXPECT_GT(r[0], 0.0);
    EXPECT_LT(r[0], 100.0);
}

TEST(Macd, ConstantSeriesIsZero) {
    const std::vector<double> c(80, 42.0);
    const auto m = macd(c);
    for (double x : m.line) EXPECT_NEAR(x, 0.0, 1e-12);
    for (double x : m.signal) EXPECT_NEAR(x, 0.0, 1e-12);
    for (double x : m.histogram) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(Macd, RampConvergesToLagDifference) {
    std::vector<double> ramp;
    for (int t = 0; t < 260; ++t) ramp.push_back(t);
    const auto m = macd(ramp);
    EXPECT_NEAR(m.line.back(), 7.0, 1e-6);
}

TEST(Macd, HistogramIsDefinitional) {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> z;
    std::vector<double> v{100};
    for (int i = 0; i < 300; ++i) v.push_back(v.back() + z(gen));
    const auto m = macd(v);
    for (std::size_t i = 0; i < m.signal.size(); ++i) EXPECT_EQ(m.histogram[i], m.line_at_signal(i) - m.signal[i]);
    EXPECT_EQ(m.signal_offset, 33u);
    EXPECT_EQ(m.line_offset, 25u);
}

TEST(Macd, BadPeriods) {
    const std::vector<double> v(100, 1.0);
    EXPECT_THROW(macd(v, {26, 12, 9}), Error);
    EXPECT_THROW(macd(v, {0, 26, 9}), Error);
}

TEST(Indicators, RandomSeriesMatchOracles) {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> z;
    for (int s = 0; s < 10; ++s) {
        std::vector<double> v{50};
        for (int i = 0; i < 200; ++i) v.push_back(v.back() * (1 + 0.01 * z(gen)));
        const auto a = sma(v, 10);
        const auto e = ema(v, 10);
        const auto r = rsi(v, 14);
        for (std::size_t i = 9; i < v.size(); ++i) {
            EXPECT_NEAR(a[i - 9], oracle::sma_at(v, 10, i), 1e-9);
            EXPECT_NEAR(e[i - 9], oracle::ema_at(v, 10, i), 1e-9);
        }
        for (std::size_t i = 14; i < v.size(); ++i) EXPECT_NEAR(r[i - 14], oracle::rsi_at(v, 14, i), 1e-9);
    }
}

TEST(Dataset, WarmupAndAlignment) {
    EXPECT_EQ(warmup({}), 34u);
    data::SyntheticSpec spec;
    spec.length = 200;
    spec.seed = 3;
    const auto series = data::generate_synthetic_series(spec, data::InstrumentId("S"));
    const auto ds = build_dataset(series);
    ASSERT_EQ(ds.size(), 200u - 34u);

    std::vector<double> closes;
    for (const auto& bar : series.bars()) closes.push_back(bar.close);
    const auto ref = oracle::macd_all(closes, 12, 26, 9);
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const std::size_t t = 34 + k;
        const auto& s = ds.samples[k];
        EXPECT_EQ(s.target_date, series.bars()[t].date);
        const auto& prev = series.bars()[t - 1];
        EXPECT_EQ(s.features.return_pct, compute_return(prev.open, prev.close));
        EXPECT_NEAR(s.features.sma, oracle::sma_at(closes, 14, t - 1), 1e-9);
        EXPECT_NEAR(s.features.rsi, oracle::rsi_at(closes, 14, t - 1), 1e-9);
        EXPECT_NEAR(s.features.macd_line, *ref[t - 1].line, 1e-9);
        EXPECT_NEAR(s.features.signal_line, *ref[t - 1].signal, 1e-9);
        const auto& bar = series.bars()[t];
        EXPECT_EQ(s.realized_return_pct, compute_return(bar.open, bar.close));
        EXPECT_EQ(s.label, s.realized_return_pct > 0 ? 1 : 0);
    }
}

TEST(Dataset, LabelRule) {
    std::vector<std::pair<double, double>> oc(36, {100.0, 100.5});
    oc[34] = {100.0, 100.4};  // +0.4%
    oc[35] = {100.0, 100.0};  // zero return
    const auto ds = build_dataset(series_from(oc));
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds.samples[0].label, 1);
    EXPECT_EQ(ds.samples[1].label, 0);
}

TEST(Dataset, TruncationChangesNoEarlierSample) {
    data::SyntheticSpec spec;
    spec.length = 400;
    spec.seed = 8;
    const auto series = data::generate_synthetic_series(spec, data::InstrumentId("S"));
    const auto full = build_dataset(series);
    for (std::size_t t : {35u, 80u, 200u, 399u}) {
        const auto part = build_dataset(series.truncated(t));
        for (std::size_t i = 0; i < part.size(); ++i) EXPECT_EQ(part.samples[i], full.samples[i]);
    }
}

TEST(Dataset, TooShortNamesRequirement) {
    std::vector<std::pair<double, double>> oc(34, {100.0, 101.0});
    try {
        build_dataset(series_from(oc));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::Validation);
        EXPECT_NE(std::string(e.what()).find("35"), std::string::npos);
    }
}

TEST(Dataset, LatestFeaturesUseLastBar) {
    data::SyntheticSpec spec;
    spec.length = 150;
    const auto series = data::generate_synthetic_series(spec, data::InstrumentId("S"));
    const auto ds = build_dataset(series);
    // The last sample's features come from bar size-2; latest_features of the
    // series without its last bar must match them.
    EXPECT_EQ(latest_features(series.truncated(series.size() - 1)), ds.samples.back().features);
}
