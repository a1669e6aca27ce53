#include "pairfinder/data/synthetic.h"

#include <algorithm>
#include <cmath>

#include "pairfinder/common/error.h"
#include "pairfinder/common/random.h"

namespace pairfinder::data {

std::string_view to_string(SyntheticKind kind) {
    return kind == SyntheticKind::PersistentSign ? "PersistentSign" : "RandomWalk";
}

SyntheticKind synthetic_kind_from_string(std::string_view name) {
    if (name == "PersistentSign") return SyntheticKind::PersistentSign;
    if (name == "RandomWalk") return SyntheticKind::RandomWalk;
    raise(ErrorCategory::Config, "unknown synthetic kind '" + std::string(name) + "'");
}

void validate(const SyntheticSpec& spec, std::size_t warmup) {
    if (!(spec.persistence >= 0.0 && spec.persistence <= 1.0)) {
        raise(ErrorCategory::Config, "synthetic persistence must lie in [0, 1]");
    }
    if (!(spec.volatility_pct > 0.0 && spec.volatility_pct <= 20.0)) {
        raise(ErrorCategory::Config, "synthetic volatility_pct must lie in (0, 20]");
    }
    if (!(spec.start_price > 0.0) || !std::isfinite(spec.start_price)) {
        raise(ErrorCategory::Config, "synthetic start_price must be positive");
    }
    if (spec.length < warmup + kSyntheticMargin) {
        raise(ErrorCategory::Config, "synthetic length " + std::to_string(spec.length) + " is below the minimum " +
                                         std::to_string(warmup + kSyntheticMargin));
    }
    if (!spec.start_date.ok()) raise(ErrorCategory::Config, "synthetic start_date is not a valid date");
}

namespace {

std::chrono::sys_days next_business_day(std::chrono::sys_days day) {
    do {
        day += std::chrono::days{1};
    } while (std::chrono::weekday{day} == std::chrono::Saturday || std::chrono::weekday{day} == std::chrono::Sunday);
    return day;
}

}  // namespace

PriceSeries generate_synthetic_series(const SyntheticSpec& spec, const InstrumentId& instrument) {
    validate(spec);
    Rng rng(spec.seed);

    std::chrono::sys_days day{spec.start_date};
    const auto weekday = std::chrono::weekday{day};
    if (weekday == std::chrono::Saturday || weekday == std::chrono::Sunday) day = next_business_day(day);

    std::vector<OhlcvBar> bars;
    bars.reserve(spec.length);
    double previous_close = spec.start_price;
    int sign = rng.bernoulli(0.5) ? 1 : -1;
    for (std::size_t t = 0; t < spec.length; ++t) {
        if (t > 0) {
            if (spec.kind == SyntheticKind::PersistentSign) {
                sign = rng.bernoulli(spec.persistence) ? sign : -sign;
            } else {
                sign = rng.bernoulli(0.5) ? 1 : -1;
            }
            day = next_business_day(day);
        }
        const double magnitude = std::min(50.0, spec.volatility_pct * std::max(0.05, std::abs(rng.normal())));
        const double return_pct = sign * magnitude;

        OhlcvBar bar;
        bar.date = std::chrono::year_month_day{day};
        bar.open = previous_close;
        bar.close = bar.open * (1.0 + return_pct / 100.0);
        bar.adj_close = bar.close;
        const double wick = spec.volatility_pct / 100.0;
        bar.high = std::max(bar.open, bar.close) * (1.0 + 0.001 + 0.5 * wick * rng.uniform());
        bar.low = std::min(bar.open, bar.close) * (1.0 - std::min(0.5, 0.001 + 0.5 * wick * rng.uniform()));
        bar.volume = 1000 + static_cast<std::int64_t>(rng.index(9000));
        bars.push_back(bar);
        previous_close = bar.close;
    }
    return PriceSeries::validated(instrument, std::move(bars));
}

}  // namespace pairfinder::data
