#include "causalsig/decision_engine.hpp"

#include <cmath>

#include "causalsig/errors.hpp"

namespace causalsig {

void DecisionConfig::validate() const {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be a positive number");
}

int update_state(int p_prev, double s, double theta) {
    if (p_prev == 0 && s > theta) return 1;
    if (p_prev == 1 && s < -theta) return 0;
    return p_prev;
}

std::vector<PositionRecord> run_decisions(std::span<const double> signal, const DecisionConfig& cfg) {
    cfg.validate();
    std::vector<PositionRecord> out;
    out.reserve(signal.size());
    int prev = 0;
    for (const double s : signal) {
        const int p = update_state(prev, s, cfg.theta);
        out.push_back({p, prev, p != prev ? 1 : 0});
        prev = p;
    }
    return out;
}

}  // namespace causalsig
