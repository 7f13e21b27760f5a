#include "causalsig/indicators.hpp"

#include <cmath>
#include <numeric>

#include "causalsig/errors.hpp"

namespace causalsig {

void IndicatorConfig::validate() const {
    if (rsi_window < 2 || mfi_window < 2 || macd_fast < 2 || macd_slow < 2 || macd_signal < 2 || bb_window < 2) {
        throw ConfigError("indicator windows must be at least 2");
    }
    if (macd_fast >= macd_slow) throw ConfigError("macd_fast must be smaller than macd_slow");
    if (!(bb_k > 0.0) || !std::isfinite(bb_k)) throw ConfigError("bb_k must be a positive number");
}

double strength_index(double up, double down) {
    if (down == 0.0) return up == 0.0 ? 50.0 : 100.0;
    if (up == 0.0) return 0.0;
    return 100.0 * (1.0 - 1.0 / (1.0 + up / down));
}

RsiState::RsiState(int window) : window_(window) {}

std::optional<double> RsiState::step(double close) {
    if (!prev_close_) {
        prev_close_ = close;
        return std::nullopt;
    }
    const double move = close - *prev_close_;
    prev_close_ = close;
    const double gain = move > 0.0 ? move : 0.0;
    const double loss = move < 0.0 ? -move : 0.0;
    ++moves_;
    if (moves_ <= window_) {
        avg_gain_ += gain;
        avg_loss_ += loss;
        if (moves_ < window_) return std::nullopt;
        avg_gain_ /= window_;
        avg_loss_ /= window_;
    } else {
        avg_gain_ = (avg_gain_ * (window_ - 1) + gain) / window_;
        avg_loss_ = (avg_loss_ * (window_ - 1) + loss) / window_;
    }
    return strength_index(avg_gain_, avg_loss_);
}

MfiState::MfiState(int window) : window_(window) {}

std::optional<double> MfiState::step(const Bar& bar) {
    const double tp = (bar.high + bar.low + bar.close) / 3.0;
    if (!prev_tp_) {
        prev_tp_ = tp;
        return std::nullopt;
    }
    const double raw = tp * bar.volume;
    Flow flow{0.0, 0.0};
    if (tp > *prev_tp_) {
        flow.positive = raw;
    } else if (tp < *prev_tp_) {
        flow.negative = raw;
    }
    prev_tp_ = tp;
    flows_.push_back(flow);
    if (flows_.size() > static_cast<std::size_t>(window_)) flows_.pop_front();
    if (flows_.size() < static_cast<std::size_t>(window_)) return std::nullopt;

    // Re-summed each bar so an empty side is exactly zero.
    double pos = 0.0, neg = 0.0;
    for (const auto& f : flows_) {
        pos += f.positive;
        neg += f.negative;
    }
    return strength_index(pos, neg);
}

Ema::Ema(int span) : alpha_(2.0 / (span + 1.0)) {}

double Ema::step(double x) {
    value_ = count_ == 0 ? x : alpha_ * x + (1.0 - alpha_) * value_;
    ++count_;
    return value_;
}

MacdState::MacdState(int fast, int slow, int signal) : slow_span_(slow), fast_(fast), slow_(slow), signal_(signal) {}

std::optional<double> MacdState::step(double close) {
    const double line = fast_.step(close) - slow_.step(close);
    const double signal = signal_.step(line);
    if (slow_.count() < slow_span_) return std::nullopt;
    return line - signal;
}

BollingerState::BollingerState(int window, double k) : window_(static_cast<std::size_t>(window)), k_(k) {}

std::optional<double> BollingerState::step(double close) {
    closes_.push_back(close);
    if (closes_.size() > window_) closes_.pop_front();
    if (closes_.size() < window_) return std::nullopt;

    const double n = static_cast<double>(window_);
    const double mean = std::accumulate(closes_.begin(), closes_.end(), 0.0) / n;
    double ss = 0.0;
    for (const double c : closes_) ss += (c - mean) * (c - mean);
    const double sigma = std::sqrt(ss / n);
    if (sigma == 0.0) return 0.5;
    // (P - (mu - k sigma)) / (2 k sigma), arranged so P == mu gives exactly 0.5.
    return 0.5 + (close - mean) / (2.0 * k_ * sigma);
}

IndicatorEngine::IndicatorEngine(const IndicatorConfig& cfg)
    : rsi_((cfg.validate(), cfg.rsi_window)),
      mfi_(cfg.mfi_window),
      macd_(cfg.macd_fast, cfg.macd_slow, cfg.macd_signal),
      bb_(cfg.bb_window, cfg.bb_k) {}

IndicatorVector IndicatorEngine::step(const Bar& bar) {
    IndicatorVector v;
    v.mfi = mfi_.step(bar);
    v.rsi = rsi_.step(bar.close);
    v.bb_pct = bb_.step(bar.close);
    v.macd_diff = macd_.step(bar.close);
    return v;
}

std::vector<IndicatorVector> compute_indicators(std::span<const Bar> bars, const IndicatorConfig& cfg) {
    IndicatorEngine engine(cfg);
    std::vector<IndicatorVector> out;
    out.reserve(bars.size());
    for (const auto& bar : bars) out.push_back(engine.step(bar));
    return out;
}

}  // namespace causalsig
