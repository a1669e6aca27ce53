#include "pairfinder/features/indicators.h"

#include <cmath>

#include "pairfinder/common/error.h"

namespace pairfinder::features {

double compute_return(double open, double close) {
    if (!(open > 0.0)) raise(ErrorCategory::Domain, "return requires a positive open price");
    return (close - open) / open * 100.0;
}

std::vector<double> sma(std::span<const double> values, std::size_t n) {
    if (n == 0 || values.size() < n) return {};
    std::vector<double> out;
    out.reserve(values.size() - n + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i];
    out.push_back(sum / static_cast<double>(n));
    for (std::size_t i = n; i < values.size(); ++i) {
        sum += values[i] - values[i - n];
        out.push_back(sum / static_cast<double>(n));
    }
    return out;
}

std::vector<double> ema(std::span<const double> values, std::size_t n) {
    if (n == 0 || values.size() < n) return {};
    const double alpha = 2.0 / (static_cast<double>(n) + 1.0);
    std::vector<double> out;
    out.reserve(values.size() - n + 1);
    double seed = 0.0;
    for (std::size_t i = 0; i < n; ++i) seed += values[i];
    double current = seed / static_cast<double>(n);
    out.push_back(current);
    for (std::size_t i = n; i < values.size(); ++i) {
        current = alpha * values[i] + (1.0 - alpha) * current;
        out.push_back(current);
    }
    return out;
}

namespace {

double rsi_from_averages(double avg_gain, double avg_loss) {
    if (avg_loss == 0.0) return avg_gain == 0.0 ? 50.0 : 100.0;
    if (avg_gain == 0.0) return 0.0;
    const double rs = avg_gain / avg_loss;
    return 100.0 - 100.0 / (1.0 + rs);
}

}  // namespace

std::vector<double> rsi(std::span<const double> values, std::size_t n) {
    if (n == 0 || values.size() < n + 1) return {};
    double gain = 0.0;
    double loss = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double move = values[i] - values[i - 1];
        if (move > 0.0) gain += move;
        else loss -= move;
    }
    const double periods = static_cast<double>(n);
    double avg_gain = gain / periods;
    double avg_loss = loss / periods;

    std::vector<double> out;
    out.reserve(values.size() - n);
    out.push_back(rsi_from_averages(avg_gain, avg_loss));
    for (std::size_t i = n + 1; i < values.size(); ++i) {
        const double move = values[i] - values[i - 1];
        avg_gain = (avg_gain * (periods - 1.0) + (move > 0.0 ? move : 0.0)) / periods;
        avg_loss = (avg_loss * (periods - 1.0) + (move < 0.0 ? -move : 0.0)) / periods;
        out.push_back(rsi_from_averages(avg_gain, avg_loss));
    }
    return out;
}

MacdSeries macd(std::span<const double> values, MacdPeriods periods) {
    if (periods.fast == 0 || periods.signal == 0 || periods.fast >= periods.slow) {
        raise(ErrorCategory::Config, "MACD needs 0 < fast < slow and signal > 0");
    }
    MacdSeries out;
    out.line_offset = periods.slow - 1;
    out.signal_offset = periods.slow + periods.signal - 2;
    if (values.size() < out.signal_offset + 1) return out;

    const auto fast = ema(values, periods.fast);
    const auto slow = ema(values, periods.slow);
    const std::size_t lag = periods.slow - periods.fast;
    out.line.reserve(slow.size());
    for (std::size_t i = 0; i < slow.size(); ++i) out.line.push_back(fast[i + lag] - slow[i]);

    out.signal = ema(out.line, periods.signal);
    out.histogram.reserve(out.signal.size());
    for (std::size_t i = 0; i < out.signal.size(); ++i) out.histogram.push_back(out.line_at_signal(i) - out.signal[i]);
    return out;
}

}  // namespace pairfinder::features
