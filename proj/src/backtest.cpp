#include "causalsig/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "causalsig/errors.hpp"

namespace causalsig {

std::vector<double> simple_returns(std::span<const double> closes) {
    if (closes.size() < 2) throw DataError("at least two prices are needed to form returns");
    for (const double p : closes) {
        if (!(p > 0.0)) throw DataError("non-positive price in return series");
    }
    std::vector<double> out(closes.size() - 1);
    for (std::size_t t = 1; t < closes.size(); ++t) {
        out[t - 1] = (closes[t] - closes[t - 1]) / closes[t - 1];
    }
    return out;
}

std::vector<EquityRecord> realized_equity(std::span<const double> returns,
                                          std::span<const PositionRecord> positions, double v0) {
    if (positions.size() != returns.size() + 1) {
        throw DataError("positions must hold exactly one more record than returns");
    }
    std::vector<EquityRecord> out;
    out.reserve(returns.size());
    double v = v0;
    double bench = v0;
    long long trades = positions.front().dp;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        const auto& pos = positions[i + 1];
        EquityRecord rec;
        rec.r = returns[i];
        rec.R = pos.p_applied * returns[i];
        v *= 1.0 + rec.R;
        bench *= 1.0 + rec.r;
        trades += pos.dp;
        rec.v = v;
        rec.v_bench = bench;
        rec.trades_cum = trades;
        out.push_back(rec);
    }
    return out;
}

std::vector<EquityRecord> realized_equity(std::span<const double> returns,
                                          std::span<const PositionRecord> positions,
                                          std::span<const Timestamp> timestamps, double v0) {
    if (timestamps.size() != positions.size()) throw DataError("timestamps must align with positions");
    auto out = realized_equity(returns, positions, v0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].timestamp = timestamps[i + 1];
    return out;
}

double max_drawdown(std::span<const double> equity) {
    if (equity.empty()) throw DataError("drawdown of an empty equity curve");
    double peak = equity.front();
    double worst = 0.0;
    for (const double v : equity) {
        if (!(v > 0.0)) throw DataError("equity values must be positive");
        peak = std::max(peak, v);
        worst = std::min(worst, v / peak - 1.0);
    }
    return worst;
}

std::vector<RegimeReport> regime_report(std::span<const EquityRecord> records, Timestamp origin,
                                        std::span<const Timestamp> splits, const RegimeOptions& options) {
    if (records.empty()) throw DataError("regime report needs at least one equity record");
    if (!(options.days_per_month > 0.0)) throw ConfigError("days_per_month must be positive");
    for (std::size_t i = 0; i < splits.size(); ++i) {
        if (splits[i] <= origin || splits[i] > records.back().timestamp) {
            throw DataError("regime split " + format_iso8601(splits[i]) + " lies outside the data range");
        }
        if (i > 0 && splits[i] <= splits[i - 1]) throw DataError("regime splits must be strictly increasing");
    }

    std::vector<RegimeReport> reports;
    std::size_t begin = 0;
    Timestamp start = origin;
    long long trades_before = 0;
    for (std::size_t k = 0; k <= splits.size(); ++k) {
        std::size_t end = begin;
        if (k < splits.size()) {
            while (end < records.size() && records[end].timestamp < splits[k]) ++end;
        } else {
            end = records.size();
        }
        if (end == begin) {
            throw DataError("regime " + std::to_string(k + 1) + " contains no bars");
        }

        std::vector<double> curve;
        curve.reserve(end - begin + 1);
        curve.push_back(1.0);
        double v = 1.0;
        for (std::size_t i = begin; i < end; ++i) {
            v *= 1.0 + records[i].R;
            curve.push_back(v);
        }

        const auto& last = records[end - 1];
        const double days =
            std::chrono::duration<double, std::ratio<86400>>(last.timestamp - start).count();
        const double months = days / options.days_per_month;

        RegimeReport rep;
        rep.period = format_iso8601(start) + ".." + format_iso8601(last.timestamp);
        rep.end_v = v;
        rep.cum_ret_pct = 100.0 * (v - 1.0);
        rep.mdd_pct = 100.0 * max_drawdown(curve);
        rep.trades_per_month = static_cast<double>(last.trades_cum - trades_before) / months;
        reports.push_back(rep);

        trades_before = last.trades_cum;
        start = last.timestamp;
        begin = end;
    }
    return reports;
}

std::string format_regime_table(std::span<const RegimeReport> reports) {
    std::string out = "Period | End V | Cum. ret. (%) | MDD (%) | Trades/mo\n";
    char buf[128];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, " | %.2f | %.0f | %.0f | %.0f\n", r.end_v, r.cum_ret_pct, r.mdd_pct,
                      r.trades_per_month);
        out += r.period;
        out += buf;
    }
    return out;
}

std::vector<ShiftCurve> forward_shift_diagnostic(std::span<const double> signal, std::span<const double> closes,
                                                 std::span<const int> shifts, const DecisionConfig& cfg) {
    if (signal.size() != closes.size()) throw DataError("signal and closes must have equal length");
    std::vector<ShiftCurve> curves;
    for (const int k : shifts) {
        if (k < 0) throw ConfigError("diagnostic shifts must be non-negative");
        if (static_cast<std::size_t>(k) >= signal.size()) {
            throw DataError("shift " + std::to_string(k) + " is not shorter than the series");
        }
        const std::size_t n = signal.size() - static_cast<std::size_t>(k);
        ShiftCurve curve{k, {}};
        if (n >= 2) {
            const auto positions = run_decisions(signal.subspan(static_cast<std::size_t>(k), n), cfg);
            const auto returns = simple_returns(closes.first(n));
            curve.equity = realized_equity(returns, positions);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace causalsig
