#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairfinder/common/text.h"

namespace pairfinder::data {

// Ticker symbol, e.g. "AAPL" or "GC=F". Never empty.
class InstrumentId {
public:
    explicit InstrumentId(std::string symbol);

    const std::string& symbol() const noexcept { return symbol_; }

    friend auto operator<=>(const InstrumentId&, const InstrumentId&) = default;

private:
    std::string symbol_;
};

struct OhlcvBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double adj_close = 0.0;
    std::int64_t volume = 0;

    friend bool operator==(const OhlcvBar&, const OhlcvBar&) = default;
};

// Empty when the bar is well formed; otherwise a description of the first
// violated invariant (positive finite prices, low <= min(open, close),
// max(open, close) <= high, volume >= 0).
std::optional<std::string> check_bar(const OhlcvBar& bar);

// Validated, date-sorted bars for one instrument. Immutable once built.
class PriceSeries {
public:
    // Sorts by date, rejects duplicate dates and malformed bars with a
    // Validation error naming the offending date.
    static PriceSeries validated(InstrumentId instrument, std::vector<OhlcvBar> bars);

    const InstrumentId& instrument() const noexcept { return instrument_; }
    const std::vector<OhlcvBar>& bars() const noexcept { return bars_; }
    std::size_t size() const noexcept { return bars_.size(); }

    // The first `count` bars, still validated.
    PriceSeries truncated(std::size_t count) const;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    PriceSeries(InstrumentId instrument, std::vector<OhlcvBar> bars)
        : instrument_(std::move(instrument)), bars_(std::move(bars)) {}

    InstrumentId instrument_;
    std::vector<OhlcvBar> bars_;
};

inline constexpr std::string_view kOhlcvHeader = "Date,Open,High,Low,Close,Adj Close,Volume";

// Parses a header-bearing OHLCV CSV. Malformed rows raise a Parse error naming
// the line number; bar invariant violations and duplicate dates raise a
// Validation error naming the date.
PriceSeries parse_ohlcv_csv(std::string_view bytes, const InstrumentId& instrument);

// Inverse of parse_ohlcv_csv; numbers are written in shortest round-trip form.
std::string serialize_ohlcv_csv(const PriceSeries& series);

// Bars whose low or high sits more than `threshold` (relative) away from the
// close. These are suspicious ticks, not invalid bars.
std::vector<Date> outlier_dates(const PriceSeries& series, double threshold = 0.5);

}  // namespace pairfinder::data
