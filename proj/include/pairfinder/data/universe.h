#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pairfinder/data/ohlcv.h"
#include "pairfinder/data/synthetic.h"

namespace pairfinder::data {

struct CsvSource {
    std::string path;
};

using DataSource = std::variant<CsvSource, SyntheticSpec>;

struct InstrumentSource {
    InstrumentId instrument;
    DataSource source;
};

struct UniverseConfig {
    std::vector<InstrumentSource> instruments;
    std::uint64_t master_seed = 0;
};

// One validated series per configured instrument, in config order.
// Raises Config for an empty or duplicated instrument list, Io for a missing
// file (naming the instrument), and Validation when a series has fewer than
// `min_bars` bars.
std::vector<PriceSeries> load_universe(const UniverseConfig& config, std::size_t min_bars, std::size_t threads = 1);

PriceSeries load_instrument(const InstrumentSource& source);

}  // namespace pairfinder::data
