#pragma once

#include <span>
#include <vector>

namespace causalsig {

struct DecisionConfig {
    double theta = 0.06;

    void validate() const;
};

// p: state after the update at t (0 flat, 1 long).
// p_applied: state carried into bar t, i.e. the one earning r_t.
// dp: |p_t - p_{t-1}|.
struct PositionRecord {
    int p = 0;
    int p_applied = 0;
    int dp = 0;

    friend bool operator==(const PositionRecord&, const PositionRecord&) = default;
};

// Hysteresis switch: enter above +theta, exit below -theta, hold otherwise
// (including exactly at +-theta).
int update_state(int p_prev, double s, double theta);

// Folds update_state over the signal starting flat.
std::vector<PositionRecord> run_decisions(std::span<const double> signal, const DecisionConfig& cfg);

}  // namespace causalsig
