#pragma once

#include <cstddef>
#include <vector>

namespace pairfinder::splits {

// Half-open index range [begin, end) into a dataset.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool empty() const noexcept { return begin == end; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SplitView {
    IndexRange learn;
    IndexRange validation;
    IndexRange test;

    friend bool operator==(const SplitView&, const SplitView&) = default;
};

struct SplitFractions {
    double test = 0.05;
    double validation = 0.10;
};

// Contiguous learn | validation | test partition of n samples, no shuffling.
// |test| = round(test_frac * n), |validation| = round(val_frac * (n - |test|)),
// rounding half away from zero; learn takes the rest. Raises Validation with
// the smallest workable n when any part would be empty.
SplitView chronological_split(std::size_t n, SplitFractions fractions = {});

// Smallest n for which chronological_split succeeds.
std::size_t minimum_split_size(SplitFractions fractions = {});

// Walk-forward layout: the last `windows * segment` samples form consecutive
// test segments; window w learns/validates on everything before its segment
// (validation = round(fractions.validation * history), the rest learn).
// segment == 0 means round(fractions.test * n), so a single window equals
// chronological_split(n). Raises Config when any part would be empty.
std::vector<SplitView> walk_forward_splits(std::size_t n, std::size_t windows, SplitFractions fractions = {},
                                           std::size_t segment = 0);

}  // namespace pairfinder::splits
