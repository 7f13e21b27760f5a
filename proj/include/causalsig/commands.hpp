#pragma once

#include <iosfwd>
#include <vector>

#include "causalsig/market_data.hpp"
#include "causalsig/run_config.hpp"
#include "causalsig/runner.hpp"

namespace causalsig {

struct LoadedBars {
    std::size_t input_count = 0;
    std::vector<Bar> session;
};

// Parses the input file and applies the session filter. Throws DataError
// when nothing survives.
LoadedBars load_session_bars(const RunConfig& cfg);

// Writes trace.csv, positions.csv, equity.csv, regimes.csv, metrics.txt and
// effective_config.ini into cfg.output_dir. On failure, files written so far
// are removed and the exception propagates.
void cmd_run(const RunConfig& cfg, std::ostream& log);

AuditResult cmd_audit_causality(const RunConfig& cfg, std::ostream& log);

// Writes shifts.csv (one equity column per shift) into cfg.output_dir.
void cmd_diagnose_shifts(const RunConfig& cfg, std::ostream& log);

}  // namespace causalsig
