#include "causalsig/signal_pipeline.hpp"

#include <cmath>
#include <numeric>

#include "causalsig/errors.hpp"

namespace causalsig {

void PipelineConfig::validate() const {
    const double alphas[] = {alpha_mfi, alpha_rsi, alpha_bb, alpha_macd, derivative_gain};
    for (const double a : alphas) {
        if (!std::isfinite(a)) throw ConfigError("pipeline scaling constants must be finite");
    }
    if (!(kalman_q > 0.0) || !std::isfinite(kalman_q)) throw ConfigError("kalman_q must be positive");
    if (!(kalman_r > 0.0) || !std::isfinite(kalman_r)) throw ConfigError("kalman_r must be positive");
    if (derivative_span < 1) throw ConfigError("derivative_span must be at least 1");
}

void ExpandingMedian::insert(double x) {
    if (lower_.empty() || x <= lower_.top()) {
        lower_.push(x);
    } else {
        upper_.push(x);
    }
    if (lower_.size() > upper_.size() + 1) {
        upper_.push(lower_.top());
        lower_.pop();
    } else if (upper_.size() > lower_.size()) {
        lower_.push(upper_.top());
        upper_.pop();
    }
}

std::optional<double> ExpandingMedian::median() const {
    if (lower_.empty()) return std::nullopt;
    if (lower_.size() > upper_.size()) return lower_.top();
    return (lower_.top() + upper_.top()) / 2.0;
}

double MedianCenter::step(double value) {
    const auto med = history_.median();
    const double centered = med ? value - *med : 0.0;
    history_.insert(value);
    return centered;
}

double composite(const std::array<double, kIndicatorCount>& centered, const PipelineConfig& cfg) {
    return (cfg.alpha_mfi * centered[kMfi] + cfg.alpha_rsi * centered[kRsi] + cfg.alpha_bb * centered[kBb] +
            cfg.alpha_macd * centered[kMacd]) /
           4.0;
}

KalmanFilter::KalmanFilter(double q, double r) : q_(q), r_(r) {}

double KalmanFilter::step(double z) {
    if (!std::isfinite(z)) throw DataError("non-finite measurement fed to the Kalman filter");
    if (!initialized_) {
        x_ = z;
        p_var_ = r_;
        initialized_ = true;
        return x_;
    }
    const double predicted = p_var_ + q_;
    const double gain = predicted / (predicted + r_);
    x_ = x_ + gain * (z - x_);
    p_var_ = (1.0 - gain) * predicted;
    return x_;
}

DerivativeSmoother::DerivativeSmoother(int span) : span_(static_cast<std::size_t>(span)) {}

double DerivativeSmoother::step(double value) {
    const double diff = prev_ ? value - *prev_ : 0.0;
    prev_ = value;
    diffs_.push_back(diff);
    if (diffs_.size() > span_) diffs_.pop_front();
    return std::accumulate(diffs_.begin(), diffs_.end(), 0.0) / static_cast<double>(diffs_.size());
}

ForwardMix forward_operator(double f0, double df0, double gain) {
    const double c1 = std::tanh(std::fabs(f0));
    const double c2 = 1.0 - std::tanh(std::fabs(f0 / 2.0));
    return {c1, c2, c1 * f0 + gain * c2 * df0};
}

SignalPipeline::SignalPipeline(const PipelineConfig& cfg)
    : cfg_((cfg.validate(), cfg)),
      kalman_(cfg.kalman_q, cfg.kalman_r),
      derivative_(cfg.derivative_span) {}

SignalState SignalPipeline::step(const IndicatorVector& v) {
    if (!v.valid()) throw DataError("signal pipeline received an indicator vector still in warm-up");
    const double raw[kIndicatorCount] = {*v.mfi, *v.rsi, *v.bb_pct, *v.macd_diff};

    SignalState s;
    for (std::size_t k = 0; k < kIndicatorCount; ++k) {
        if (!std::isfinite(raw[k])) throw DataError("non-finite indicator value");
        s.centered[k] = centers_[k].step(raw[k]);
    }
    s.f0_raw = composite(s.centered, cfg_);
    s.f0 = kalman_.step(s.f0_raw);
    const double driver = cfg_.forward_uses_filtered ? s.f0 : s.f0_raw;
    s.df0 = derivative_.step(driver);
    const auto mix = forward_operator(driver, s.df0, cfg_.derivative_gain);
    s.c1 = mix.c1;
    s.c2 = mix.c2;
    s.f = mix.f;
    return s;
}

}  // namespace causalsig
