#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "causalsig/market_data.hpp"

namespace causalsig {

struct IndicatorConfig {
    int rsi_window = 14;
    int mfi_window = 14;
    int macd_fast = 12;
    int macd_slow = 26;
    int macd_signal = 9;
    int bb_window = 20;
    double bb_k = 2.0;

    // Throws ConfigError: all windows >= 2, macd_fast < macd_slow, bb_k > 0.
    void validate() const;
};

// Indicator values at one bar. An empty optional means that indicator is still
// warming up.
struct IndicatorVector {
    std::optional<double> mfi;
    std::optional<double> rsi;
    std::optional<double> bb_pct;
    std::optional<double> macd_diff;

    bool valid() const { return mfi && rsi && bb_pct && macd_diff; }
};

// 100 * (1 - 1 / (1 + up / down)) with the continuous limits at zero:
// down == 0 -> 100, up == 0 -> 0, both zero -> 50.
double strength_index(double up, double down);

// Wilder RSI. The first average is the simple mean of the first `window`
// close-to-close moves; later ones blend in each move with weight 1/window.
class RsiState {
public:
    explicit RsiState(int window);
    std::optional<double> step(double close);

private:
    int window_;
    std::optional<double> prev_close_;
    int moves_ = 0;
    double avg_gain_ = 0.0;
    double avg_loss_ = 0.0;
};

// Money flow index over the trailing `window` typical-price moves.
class MfiState {
public:
    explicit MfiState(int window);
    std::optional<double> step(const Bar& bar);

private:
    struct Flow {
        double positive;
        double negative;
    };
    int window_;
    std::optional<double> prev_tp_;
    std::deque<Flow> flows_;
};

// Exponential moving average with weight 2/(span+1), seeded at the first value.
class Ema {
public:
    explicit Ema(int span);
    double step(double x);
    long long count() const { return count_; }

private:
    double alpha_;
    double value_ = 0.0;
    long long count_ = 0;
};

// (EMA_fast - EMA_slow) - EMA_signal(EMA_fast - EMA_slow). Valid once the slow
// EMA has absorbed `slow` closes.
class MacdState {
public:
    MacdState(int fast, int slow, int signal);
    std::optional<double> step(double close);

private:
    int slow_span_;
    Ema fast_;
    Ema slow_;
    Ema signal_;
};

// Bollinger %B over a trailing window, population standard deviation.
// A collapsed band (sigma == 0) reports 0.5.
class BollingerState {
public:
    BollingerState(int window, double k);
    std::optional<double> step(double close);

private:
    std::size_t window_;
    double k_;
    std::deque<double> closes_;
};

// All four indicators fed from one bar stream.
class IndicatorEngine {
public:
    explicit IndicatorEngine(const IndicatorConfig& cfg);
    IndicatorVector step(const Bar& bar);

private:
    RsiState rsi_;
    MfiState mfi_;
    MacdState macd_;
    BollingerState bb_;
};

std::vector<IndicatorVector> compute_indicators(std::span<const Bar> bars, const IndicatorConfig& cfg);

}  // namespace causalsig
