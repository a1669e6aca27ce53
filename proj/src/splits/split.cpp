#include "pairfinder/splits/split.h"

#include <cmath>
#include <optional>
#include <string>

#include "pairfinder/common/error.h"

namespace pairfinder::splits {

namespace {

std::optional<SplitView> try_split(std::size_t n, SplitFractions fractions) {
    const auto test = static_cast<std::size_t>(std::round(fractions.test * static_cast<double>(n)));
    if (test == 0 || test >= n) return std::nullopt;
    const std::size_t remainder = n - test;
    const auto validation = static_cast<std::size_t>(std::round(fractions.validation * static_cast<double>(remainder)));
    if (validation == 0 || validation >= remainder) return std::nullopt;
    const std::size_t learn = remainder - validation;
    return SplitView{{0, learn}, {learn, remainder}, {remainder, n}};
}

void check_fractions(SplitFractions fractions) {
    if (!(fractions.test > 0.0 && fractions.test < 1.0) || !(fractions.validation > 0.0 && fractions.validation < 1.0)) {
        raise(ErrorCategory::Config, "split fractions must lie in (0, 1)");
    }
}

}  // namespace

std::size_t minimum_split_size(SplitFractions fractions) {
    check_fractions(fractions);
    for (std::size_t n = 3; n < 1'000'000; ++n) {
        if (try_split(n, fractions)) return n;
    }
    raise(ErrorCategory::Config, "split fractions admit no usable dataset size");
}

SplitView chronological_split(std::size_t n, SplitFractions fractions) {
    check_fractions(fractions);
    if (auto view = try_split(n, fractions)) return *view;
    raise(ErrorCategory::Validation, "cannot split " + std::to_string(n) + " samples into non-empty parts; need at least " +
                                         std::to_string(minimum_split_size(fractions)));
}

std::vector<SplitView> walk_forward_splits(std::size_t n, std::size_t windows, SplitFractions fractions,
                                           std::size_t segment) {
    check_fractions(fractions);
    if (windows == 0) raise(ErrorCategory::Config, "walk-forward needs at least one window");
    if (segment == 0) segment = static_cast<std::size_t>(std::round(fractions.test * static_cast<double>(n)));
    if (segment == 0 || windows * segment >= n) {
        raise(ErrorCategory::Config, std::to_string(windows) + " windows of " + std::to_string(segment) +
                                         " samples do not fit in " + std::to_string(n) + " samples");
    }
    std::vector<SplitView> out;
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t test_begin = n - (windows - w) * segment;
        const auto validation =
            static_cast<std::size_t>(std::round(fractions.validation * static_cast<double>(test_begin)));
        if (validation == 0 || validation >= test_begin) {
            raise(ErrorCategory::Config, "walk-forward window " + std::to_string(w + 1) + " has only " +
                                             std::to_string(test_begin) + " history samples");
        }
        const std::size_t learn = test_begin - validation;
        out.push_back({{0, learn}, {learn, test_begin}, {test_begin, test_begin + segment}});
    }
    return out;
}

}  // namespace pairfinder::splits
