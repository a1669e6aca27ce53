#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pairfinder::features {

// Open-to-close return in percent. Raises Domain for a non-positive open.
double compute_return(double open, double close);

// Indicator outputs are "valid-only": element 0 corresponds to the first input
// index at which the indicator is defined. The offset of that index is given
// in each function's comment. Inputs that are too short yield an empty vector.

// Simple moving average; element 0 is input index n-1.
std::vector<double> sma(std::span<const double> values, std::size_t n);

// Exponential moving average with alpha = 2/(n+1), seeded with the SMA of the
// first n values; element 0 is input index n-1.
std::vector<double> ema(std::span<const double> values, std::size_t n);

// Wilder RSI; element 0 is input index n. The first averages are plain means
// of the first n up/down moves, later ones are smoothed as
// avg = (avg * (n-1) + move) / n. A zero average loss gives 100, a zero
// average gain gives 0, and a window with no movement at all gives 50.
std::vector<double> rsi(std::span<const double> values, std::size_t n);

struct MacdPeriods {
    std::size_t fast = 12;
    std::size_t slow = 26;
    std::size_t signal = 9;
};

struct MacdSeries {
    // Input index of line[0]: slow - 1.
    std::size_t line_offset = 0;
    // Input index of signal[0] and histogram[0]: slow + signal - 2.
    std::size_t signal_offset = 0;
    std::vector<double> line;
    std::vector<double> signal;
    std::vector<double> histogram;

    // Line value aligned with signal[i].
    double line_at_signal(std::size_t i) const { return line[i + signal_offset - line_offset]; }
};

// MACD line = EMA(fast) - EMA(slow) on their common support, signal =
// EMA(line, signal), histogram = line - signal.
MacdSeries macd(std::span<const double> values, MacdPeriods periods = {});

}  // namespace pairfinder::features
