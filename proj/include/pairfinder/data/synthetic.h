#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "pairfinder/data/ohlcv.h"

namespace pairfinder::data {

enum class SyntheticKind {
    // sign(return_t) repeats sign(return_{t-1}) with probability `persistence`.
    PersistentSign,
    // Return signs are independent fair coin flips.
    RandomWalk,
};

std::string_view to_string(SyntheticKind kind);
SyntheticKind synthetic_kind_from_string(std::string_view name);

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::RandomWalk;
    std::size_t length = 2000;
    double persistence = 0.5;
    double volatility_pct = 1.0;
    std::uint64_t seed = 0;
    double start_price = 100.0;
    Date start_date = Date{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};
};

// Smallest accepted synthetic length for a given feature warmup.
inline constexpr std::size_t kSyntheticMargin = 100;

// Raises a Config error when the spec is unusable: persistence outside [0, 1],
// volatility outside (0, 20], non-positive start price, or
// length < warmup + kSyntheticMargin.
void validate(const SyntheticSpec& spec, std::size_t warmup = 34);

// Deterministic daily series on business days (Mon-Fri). Each day opens at the
// previous close; the open-to-close return has magnitude
// volatility * max(0.05, |z|) percent (capped at 50%) and a sign drawn per
// `kind`. High and low extend the body by a small positive random margin.
PriceSeries generate_synthetic_series(const SyntheticSpec& spec, const InstrumentId& instrument);

}  // namespace pairfinder::data
