#include "pairfinder/data/universe.h"

#include <filesystem>
#include <optional>
#include <set>

#include "pairfinder/common/error.h"
#include "pairfinder/common/log.h"
#include "pairfinder/common/parallel.h"

namespace pairfinder::data {

PriceSeries load_instrument(const InstrumentSource& source) {
    const auto& symbol = source.instrument.symbol();
    if (const auto* csv = std::get_if<CsvSource>(&source.source)) {
        if (!std::filesystem::exists(csv->path)) {
            raise(ErrorCategory::Io, symbol + ": data file '" + csv->path + "' not found");
        }
        auto series = parse_ohlcv_csv(read_file(csv->path), source.instrument);
        for (const auto& date : outlier_dates(series)) {
            logger().warn("{}: suspicious bar on {} (low/high far from close)", symbol, format_date(date));
        }
        return series;
    }
    return generate_synthetic_series(std::get<SyntheticSpec>(source.source), source.instrument);
}

std::vector<PriceSeries> load_universe(const UniverseConfig& config, std::size_t min_bars, std::size_t threads) {
    if (config.instruments.empty()) raise(ErrorCategory::Config, "universe has no instruments");
    std::set<std::string> seen;
    for (const auto& entry : config.instruments) {
        if (!seen.insert(entry.instrument.symbol()).second) {
            raise(ErrorCategory::Config, "instrument '" + entry.instrument.symbol() + "' listed twice");
        }
    }

    std::vector<std::optional<PriceSeries>> loaded(config.instruments.size());
    parallel_for(loaded.size(), threads, [&](std::size_t i) { loaded[i] = load_instrument(config.instruments[i]); });

    std::vector<PriceSeries> out;
    out.reserve(loaded.size());
    for (auto& series : loaded) {
        if (series->size() < min_bars) {
            raise(ErrorCategory::Validation, series->instrument().symbol() + ": " + std::to_string(series->size()) +
                                                 " bars, need at least " + std::to_string(min_bars));
        }
        out.push_back(std::move(*series));
    }
    return out;
}

}  // namespace pairfinder::data
