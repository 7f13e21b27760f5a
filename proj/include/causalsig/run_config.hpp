#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "causalsig/backtest.hpp"
#include "causalsig/decision_engine.hpp"
#include "causalsig/indicators.hpp"
#include "causalsig/market_data.hpp"
#include "causalsig/signal_pipeline.hpp"

namespace causalsig {

// Everything a run needs. Loaded from an INI-style file whose sections mirror
// the member names: [input] [session] [indicators] [pipeline] [decision]
// [backtest] [diagnostics] [audit] [output]. Only input.path and
// session.timezone lack defaults.
struct RunConfig {
    std::string input_path;
    ColumnMapping columns;
    SessionPolicy session;
    IndicatorConfig indicators;
    PipelineConfig pipeline;
    DecisionConfig decision;
    RegimeOptions regimes;
    std::vector<Timestamp> splits;
    std::vector<int> shifts{0, 1, 2, 3};
    int cuts = 50;
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    // Throws ConfigError naming the first invalid field.
    void validate() const;
};

// Unknown sections or keys are rejected so typos do not silently fall back to
// defaults. Throws ConfigError.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

// Writes every field, defaults included, in the format parse_run_config reads.
std::string render_run_config(const RunConfig& cfg);

// "Sunday 18:00" style boundary.
WeeklyBoundary parse_weekly_boundary(const std::string& text);
std::string format_weekly_boundary(const WeeklyBoundary& b);

// Comma-separated integers; throws ConfigError on a negative or malformed entry.
std::vector<int> parse_shift_list(const std::string& text);

}  // namespace causalsig
