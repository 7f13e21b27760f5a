#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "causalsig/indicators.hpp"

namespace causalsig {

struct PipelineConfig {
    double alpha_mfi = 0.02;
    double alpha_rsi = 0.02;
    double alpha_bb = 2.0;
    double alpha_macd = 1.0e4;
    double kalman_q = 0.01;
    double kalman_r = 0.1;
    int derivative_span = 4;
    double derivative_gain = 2.0;
    // When false the forward operator reads the unfiltered composite instead.
    bool forward_uses_filtered = true;

    void validate() const;
};

// Indicator order used by every per-indicator array below.
enum IndicatorIndex : std::size_t { kMfi = 0, kRsi = 1, kBb = 2, kMacd = 3, kIndicatorCount = 4 };

struct SignalState {
    std::array<double, kIndicatorCount> centered{};
    double f0_raw = 0.0;
    double f0 = 0.0;
    double df0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double f = 0.0;
};

// Median of every value inserted so far, kept in two heaps: the lower half in a
// max-heap and the upper half in a min-heap, with the lower half never smaller.
class ExpandingMedian {
public:
    void insert(double x);
    std::optional<double> median() const;
    std::size_t size() const { return lower_.size() + upper_.size(); }

private:
    std::priority_queue<double> lower_;
    std::priority_queue<double, std::vector<double>, std::greater<>> upper_;
};

// Subtracts the median of all strictly earlier values, then records `value`.
// The first value centers to 0.
class MedianCenter {
public:
    double step(double value);

private:
    ExpandingMedian history_;
};

double composite(const std::array<double, kIndicatorCount>& centered, const PipelineConfig& cfg);

// Scalar random-walk Kalman filter. Starts at the first measurement with
// variance r; no backward pass.
class KalmanFilter {
public:
    KalmanFilter(double q, double r);
    // Throws DataError on a non-finite measurement.
    double step(double z);

    double estimate() const { return x_; }
    double variance() const { return p_var_; }
    bool initialized() const { return initialized_; }

private:
    double q_;
    double r_;
    double x_ = 0.0;
    double p_var_ = 0.0;
    bool initialized_ = false;
};

// Backward difference (0 at the first sample) averaged over the most recent
// min(t + 1, span) differences.
class DerivativeSmoother {
public:
    explicit DerivativeSmoother(int span);
    double step(double value);

private:
    std::size_t span_;
    std::optional<double> prev_;
    std::deque<double> diffs_;
};

struct ForwardMix {
    double c1;
    double c2;
    double f;
};

// c1 = tanh|f0|, c2 = 1 - tanh|f0/2|, f = c1 f0 + gain c2 df0.
ForwardMix forward_operator(double f0, double df0, double gain = 2.0);

class SignalPipeline {
public:
    explicit SignalPipeline(const PipelineConfig& cfg);
    // `v` must be valid(); throws DataError otherwise or on non-finite input.
    SignalState step(const IndicatorVector& v);

    const PipelineConfig& config() const { return cfg_; }

private:
    PipelineConfig cfg_;
    std::array<MedianCenter, kIndicatorCount> centers_;
    KalmanFilter kalman_;
    DerivativeSmoother derivative_;
};

}  // namespace causalsig
