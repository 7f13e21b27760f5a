#pragma once

#include <span>
#include <string>
#include <vector>

#include "causalsig/decision_engine.hpp"
#include "causalsig/timestamp.hpp"

namespace causalsig {

// One row per return period t >= 1. No transaction costs are modelled.
struct EquityRecord {
    Timestamp timestamp{};
    double r = 0.0;      // asset simple return
    double R = 0.0;      // strategy return, p_applied * r
    double v = 1.0;      // compounded strategy equity, V0 = 1 before the first row
    double v_bench = 1.0;
    long long trades_cum = 0;  // includes the state change at t = 0
};

// Throws DataError for fewer than two prices or a non-positive price.
std::vector<double> simple_returns(std::span<const double> closes);

// returns[i] is the return into bar i+1, so positions must hold exactly one
// more record than returns. Row i uses positions[i+1].p_applied.
std::vector<EquityRecord> realized_equity(std::span<const double> returns,
                                          std::span<const PositionRecord> positions, double v0 = 1.0);

// Same, stamping row i with timestamps[i+1] (timestamps aligned to positions).
std::vector<EquityRecord> realized_equity(std::span<const double> returns,
                                          std::span<const PositionRecord> positions,
                                          std::span<const Timestamp> timestamps, double v0 = 1.0);

// min_t v_t / max_{s<=t} v_s - 1. Throws DataError on empty or non-positive input.
double max_drawdown(std::span<const double> equity);

struct RegimeReport {
    std::string period;
    double end_v = 1.0;
    double cum_ret_pct = 0.0;
    double mdd_pct = 0.0;
    double trades_per_month = 0.0;
};

struct RegimeOptions {
    double days_per_month = 30.44;
};

// Splits the rows at each split time (a row belongs to the first regime whose
// split lies strictly after it) and compounds each regime from 1. `origin` is
// the timestamp of the bar before the first row, where V0 = 1; a regime's
// duration runs from the previous regime's last row (or origin) to its own
// last row. Throws DataError when a split is out of range, splits are not
// strictly increasing, or any regime is empty.
std::vector<RegimeReport> regime_report(std::span<const EquityRecord> records, Timestamp origin,
                                        std::span<const Timestamp> splits, const RegimeOptions& options = {});

// Table 1 layout: Period | End V | Cum. ret. (%) | MDD (%) | Trades/mo.
std::string format_regime_table(std::span<const RegimeReport> reports);

struct ShiftCurve {
    int shift = 0;
    std::vector<EquityRecord> equity;
};

// NON-CAUSAL evaluation aid. For shift k the decision at bar t reads
// signal[t + k]; the last k bars are dropped and accounting is unchanged.
// Throws ConfigError for a negative shift and DataError for shift >= length.
std::vector<ShiftCurve> forward_shift_diagnostic(std::span<const double> signal, std::span<const double> closes,
                                                 std::span<const int> shifts, const DecisionConfig& cfg);

}  // namespace causalsig
