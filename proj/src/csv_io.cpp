#include "causalsig/csv_io.hpp"

#include <charconv>
#include <ostream>

namespace causalsig {
namespace {

void put_optional(std::ostream& out, const std::optional<double>& v) {
    out << ',';
    if (v) out << format_double(*v);
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
    out << "timestamp,valid,close,mfi,rsi,bb_pct,macd_diff,centered_mfi,centered_rsi,centered_bb,centered_macd,"
           "f0_raw,f0,df0,c1,c2,f\n";
    for (const auto& row : trace) {
        out << format_iso8601(row.timestamp) << ',' << (row.signal ? 1 : 0) << ',' << format_double(row.close);
        put_optional(out, row.indicators.mfi);
        put_optional(out, row.indicators.rsi);
        put_optional(out, row.indicators.bb_pct);
        put_optional(out, row.indicators.macd_diff);
        if (row.signal) {
            const auto& s = *row.signal;
            for (const double c : s.centered) out << ',' << format_double(c);
            for (const double x : {s.f0_raw, s.f0, s.df0, s.c1, s.c2, s.f}) out << ',' << format_double(x);
        } else {
            out << ",,,,,,,,,,";
        }
        out << '\n';
    }
}

void write_positions_csv(std::ostream& out, std::span<const Timestamp> times,
                         std::span<const PositionRecord> positions) {
    out << "timestamp,p,p_applied,dp\n";
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out << format_iso8601(times[i]) << ',' << positions[i].p << ',' << positions[i].p_applied << ','
            << positions[i].dp << '\n';
    }
}

void write_equity_csv(std::ostream& out, std::span<const EquityRecord> equity) {
    out << "timestamp,r,R,v,v_bench,trades_cum\n";
    for (const auto& e : equity) {
        out << format_iso8601(e.timestamp) << ',' << format_double(e.r) << ',' << format_double(e.R) << ','
            << format_double(e.v) << ',' << format_double(e.v_bench) << ',' << e.trades_cum << '\n';
    }
}

void write_regimes_csv(std::ostream& out, std::span<const RegimeReport> reports) {
    out << "period,end_v,cum_ret_pct,mdd_pct,trades_per_month\n";
    for (const auto& r : reports) {
        out << r.period << ',' << format_double(r.end_v) << ',' << format_double(r.cum_ret_pct) << ','
            << format_double(r.mdd_pct) << ',' << format_double(r.trades_per_month) << '\n';
    }
}

void write_shifts_csv(std::ostream& out, std::span<const Timestamp> times, std::span<const ShiftCurve> curves) {
    out << "# NON-CAUSAL diagnostic: shift k feeds the decision rule the signal from k bars in the future.\n";
    out << "# Accounting is the standard one-step-delayed backtest; no transaction costs.\n";
    out << "timestamp";
    std::size_t rows = 0;
    for (const auto& c : curves) {
        out << ",v_shift" << c.shift;
        rows = std::max(rows, c.equity.size());
    }
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        out << format_iso8601(times[i + 1]);
        for (const auto& c : curves) {
            out << ',';
            if (i < c.equity.size()) out << format_double(c.equity[i].v);
        }
        out << '\n';
    }
}

}  // namespace causalsig
