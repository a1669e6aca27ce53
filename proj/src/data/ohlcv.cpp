#include "pairfinder/data/ohlcv.h"

#include <algorithm>
#include <cmath>

#include "pairfinder/common/error.h"

namespace pairfinder::data {

InstrumentId::InstrumentId(std::string symbol) : symbol_(std::move(symbol)) {
    if (symbol_.empty()) raise(ErrorCategory::Config, "instrument symbol must not be empty");
}

std::optional<std::string> check_bar(const OhlcvBar& bar) {
    for (double price : {bar.open, bar.high, bar.low, bar.close, bar.adj_close}) {
        if (!std::isfinite(price) || price <= 0.0) return "prices must be positive and finite";
    }
    if (bar.volume < 0) return "volume must be non-negative";
    if (bar.low > bar.high) return "low > high";
    if (bar.high < std::max(bar.open, bar.close)) return "high below max(open, close)";
    if (bar.low > std::min(bar.open, bar.close)) return "low above min(open, close)";
    return std::nullopt;
}

PriceSeries PriceSeries::validated(InstrumentId instrument, std::vector<OhlcvBar> bars) {
    for (const auto& bar : bars) {
        if (auto problem = check_bar(bar)) {
            raise(ErrorCategory::Validation, instrument.symbol() + ": bar " + format_date(bar.date) + ": " + *problem);
        }
    }
    std::stable_sort(bars.begin(), bars.end(), [](const OhlcvBar& a, const OhlcvBar& b) {
        return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    });
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].date == bars[i - 1].date) {
            raise(ErrorCategory::Validation,
                  instrument.symbol() + ": duplicate date " + format_date(bars[i].date));
        }
    }
    return PriceSeries(std::move(instrument), std::move(bars));
}

PriceSeries PriceSeries::truncated(std::size_t count) const {
    count = std::min(count, bars_.size());
    return PriceSeries(instrument_, std::vector<OhlcvBar>(bars_.begin(), bars_.begin() + static_cast<std::ptrdiff_t>(count)));
}

namespace {

[[noreturn]] void row_error(const InstrumentId& instrument, std::size_t line, const std::string& what) {
    raise(ErrorCategory::Parse, instrument.symbol() + ": row " + std::to_string(line) + ": " + what);
}

std::optional<std::int64_t> parse_volume(std::string_view text) {
    if (auto as_int = parse_int(text)) return *as_int;
    // Some feeds emit volume as "184.0".
    if (auto as_double = parse_double(text); as_double && std::floor(*as_double) == *as_double &&
                                             std::abs(*as_double) < 9.0e18) {
        return static_cast<std::int64_t>(*as_double);
    }
    return std::nullopt;
}

}  // namespace

PriceSeries parse_ohlcv_csv(std::string_view bytes, const InstrumentId& instrument) {
    if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);
    const auto lines = split_lines(bytes);

    std::size_t index = 0;
    while (index < lines.size() && trim(lines[index]).empty()) ++index;
    if (index == lines.size()) row_error(instrument, 1, "missing header");

    const auto header = split(lines[index], ',');
    const auto expected = split(kOhlcvHeader, ',');
    bool header_ok = header.size() == expected.size();
    for (std::size_t i = 0; header_ok && i < header.size(); ++i) header_ok = trim(header[i]) == expected[i];
    if (!header_ok) row_error(instrument, index + 1, "expected header '" + std::string(kOhlcvHeader) + "'");

    std::vector<OhlcvBar> bars;
    for (++index; index < lines.size(); ++index) {
        const std::size_t line_no = index + 1;
        if (trim(lines[index]).empty()) continue;
        const auto fields = split(lines[index], ',');
        if (fields.size() != 7) {
            row_error(instrument, line_no, "expected 7 fields, found " + std::to_string(fields.size()));
        }
        OhlcvBar bar;
        auto date = parse_date(trim(fields[0]));
        if (!date) row_error(instrument, line_no, "bad date '" + std::string(fields[0]) + "'");
        bar.date = *date;
        double* targets[] = {&bar.open, &bar.high, &bar.low, &bar.close, &bar.adj_close};
        for (std::size_t f = 0; f < 5; ++f) {
            auto value = parse_double(fields[f + 1]);
            if (!value) row_error(instrument, line_no, "bad number '" + std::string(fields[f + 1]) + "'");
            *targets[f] = *value;
        }
        // A negative count parses fine and is left to bar validation.
        const auto volume = parse_volume(fields[6]);
        if (!volume) row_error(instrument, line_no, "bad volume '" + std::string(fields[6]) + "'");
        bar.volume = *volume;
        bars.push_back(bar);
    }
    return PriceSeries::validated(instrument, std::move(bars));
}

std::string serialize_ohlcv_csv(const PriceSeries& series) {
    std::string out(kOhlcvHeader);
    out += '\n';
    for (const auto& bar : series.bars()) {
        out += format_date(bar.date);
        for (double value : {bar.open, bar.high, bar.low, bar.close, bar.adj_close}) {
            out += ',';
            out += format_double(value);
        }
        out += ',';
        out += std::to_string(bar.volume);
        out += '\n';
    }
    return out;
}

std::vector<Date> outlier_dates(const PriceSeries& series, double threshold) {
    std::vector<Date> flagged;
    for (const auto& bar : series.bars()) {
        if (std::abs(bar.low / bar.close - 1.0) > threshold || std::abs(bar.high / bar.close - 1.0) > threshold) {
            flagged.push_back(bar.date);
        }
    }
    return flagged;
}

}  // namespace pairfinder::data
