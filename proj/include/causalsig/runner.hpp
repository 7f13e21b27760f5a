#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causalsig/backtest.hpp"
#include "causalsig/decision_engine.hpp"
#include "causalsig/indicators.hpp"
#include "causalsig/market_data.hpp"
#include "causalsig/signal_pipeline.hpp"

namespace causalsig {

// One row per session bar. `signal` is empty while any indicator warms up.
struct TraceRow {
    Timestamp timestamp;
    double close = 0.0;
    IndicatorVector indicators;
    std::optional<SignalState> signal;
};

struct RunArtifacts {
    std::vector<TraceRow> trace;
    // The following are restricted to bars that carry a signal.
    std::vector<Timestamp> times;
    std::vector<double> closes;
    std::vector<double> signal;
    std::vector<PositionRecord> positions;
    std::vector<EquityRecord> equity;  // one shorter than positions (empty if < 2 bars)
};

// Streams bars through indicators, signal pipeline, decisions and accounting.
RunArtifacts run_pipeline(std::span<const Bar> bars, const IndicatorConfig& indicators,
                          const PipelineConfig& pipeline, const DecisionConfig& decision);

using PipelineRunner = std::function<RunArtifacts(std::span<const Bar>)>;

struct AuditResult {
    bool pass = true;
    int cuts_checked = 0;
    std::vector<std::string> warnings;
    // Set on failure: earliest divergence found over all cuts.
    std::size_t prefix_length = 0;
    std::optional<Timestamp> divergent_timestamp;
    std::string divergent_column;
};

// Reruns `runner` on `cuts` seeded random prefixes and requires every output
// column to match the full run's prefix bit for bit.
AuditResult audit_causality(std::span<const Bar> bars, const PipelineRunner& runner, int cuts, std::uint64_t seed);

}  // namespace causalsig
