#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "causalsig/backtest.hpp"
#include "causalsig/runner.hpp"

namespace causalsig {

// 17 significant digits, so reading the text back yields the same double.
std::string format_double(double value);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);
void write_positions_csv(std::ostream& out, std::span<const Timestamp> times,
                         std::span<const PositionRecord> positions);
void write_equity_csv(std::ostream& out, std::span<const EquityRecord> equity);
void write_regimes_csv(std::ostream& out, std::span<const RegimeReport> reports);
void write_shifts_csv(std::ostream& out, std::span<const Timestamp> times, std::span<const ShiftCurve> curves);

}  // namespace causalsig
