#include "causalsig/runner.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "causalsig/errors.hpp"

namespace causalsig {

RunArtifacts run_pipeline(std::span<const Bar> bars, const IndicatorConfig& indicators,
                          const PipelineConfig& pipeline, const DecisionConfig& decision) {
    decision.validate();
    IndicatorEngine engine(indicators);
    SignalPipeline signal_pipeline(pipeline);

    RunArtifacts out;
    out.trace.reserve(bars.size());
    for (const auto& bar : bars) {
        TraceRow row{bar.timestamp, bar.close, engine.step(bar), std::nullopt};
        if (row.indicators.valid()) {
            row.signal = signal_pipeline.step(row.indicators);
            out.times.push_back(bar.timestamp);
            out.closes.push_back(bar.close);
            out.signal.push_back(row.signal->f);
        }
        out.trace.push_back(row);
    }
    out.positions = run_decisions(out.signal, decision);
    if (out.closes.size() >= 2) {
        out.equity = realized_equity(simple_returns(out.closes), out.positions, out.times);
    }
    return out;
}

namespace {

struct Divergence {
    Timestamp timestamp;
    std::string column;
};

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || same_bits(*a, *b);
}

std::optional<std::string> first_trace_mismatch(const TraceRow& a, const TraceRow& b) {
    if (a.timestamp != b.timestamp) return "timestamp";
    if (!same_bits(a.close, b.close)) return "close";
    if (!same_bits(a.indicators.mfi, b.indicators.mfi)) return "mfi";
    if (!same_bits(a.indicators.rsi, b.indicators.rsi)) return "rsi";
    if (!same_bits(a.indicators.bb_pct, b.indicators.bb_pct)) return "bb_pct";
    if (!same_bits(a.indicators.macd_diff, b.indicators.macd_diff)) return "macd_diff";
    if (a.signal.has_value() != b.signal.has_value()) return "valid";
    if (!a.signal) return std::nullopt;
    const auto& x = *a.signal;
    const auto& y = *b.signal;
    static const char* centered_names[] = {"centered_mfi", "centered_rsi", "centered_bb", "centered_macd"};
    for (std::size_t k = 0; k < kIndicatorCount; ++k) {
        if (!same_bits(x.centered[k], y.centered[k])) return centered_names[k];
    }
    if (!same_bits(x.f0_raw, y.f0_raw)) return "f0_raw";
    if (!same_bits(x.f0, y.f0)) return "f0";
    if (!same_bits(x.df0, y.df0)) return "df0";
    if (!same_bits(x.c1, y.c1)) return "c1";
    if (!same_bits(x.c2, y.c2)) return "c2";
    if (!same_bits(x.f, y.f)) return "f";
    return std::nullopt;
}

std::optional<std::string> first_equity_mismatch(const EquityRecord& a, const EquityRecord& b) {
    if (a.timestamp != b.timestamp) return "equity.timestamp";
    if (!same_bits(a.r, b.r)) return "r";
    if (!same_bits(a.R, b.R)) return "R";
    if (!same_bits(a.v, b.v)) return "v";
    if (!same_bits(a.v_bench, b.v_bench)) return "v_bench";
    if (a.trades_cum != b.trades_cum) return "trades_cum";
    return std::nullopt;
}

// Earliest row of `prefix` that differs from `full`.
std::optional<Divergence> compare_prefix(const RunArtifacts& full, const RunArtifacts& prefix) {
    std::optional<Divergence> best;
    auto consider = [&](Timestamp ts, std::string column) {
        if (!best || ts < best->timestamp) best = Divergence{ts, std::move(column)};
    };

    if (prefix.trace.size() > full.trace.size()) {
        consider(prefix.trace.back().timestamp, "row count");
    }
    for (std::size_t i = 0; i < prefix.trace.size() && i < full.trace.size(); ++i) {
        if (auto col = first_trace_mismatch(full.trace[i], prefix.trace[i])) {
            consider(prefix.trace[i].timestamp, *col);
            break;
        }
    }
    for (std::size_t i = 0; i < prefix.positions.size() && i < full.positions.size(); ++i) {
        const auto& a = full.positions[i];
        const auto& b = prefix.positions[i];
        if (full.times[i] != prefix.times[i] || a != b) {
            consider(prefix.times[i], a.p != b.p ? "p" : (a.p_applied != b.p_applied ? "p_applied" : "dp"));
            break;
        }
    }
    for (std::size_t i = 0; i < prefix.equity.size() && i < full.equity.size(); ++i) {
        if (auto col = first_equity_mismatch(full.equity[i], prefix.equity[i])) {
            consider(prefix.equity[i].timestamp, *col);
            break;
        }
    }
    return best;
}

}  // namespace

AuditResult audit_causality(std::span<const Bar> bars, const PipelineRunner& runner, int cuts, std::uint64_t seed) {
    if (cuts < 0) throw ConfigError("cuts must be non-negative");
    AuditResult result;
    if (cuts == 0) {
        result.warnings.push_back("no cut points requested; the audit is vacuous");
        return result;
    }
    if (bars.size() < 2) throw DataError("causality audit needs at least two bars");

    const RunArtifacts full = runner(bars);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(1, bars.size() - 1);

    for (int c = 0; c < cuts; ++c) {
        const std::size_t length = pick(rng);
        const RunArtifacts prefix = runner(bars.first(length));
        ++result.cuts_checked;
        if (auto d = compare_prefix(full, prefix)) {
            if (result.pass || d->timestamp < *result.divergent_timestamp) {
                result.divergent_timestamp = d->timestamp;
                result.divergent_column = d->column;
                result.prefix_length = length;
            }
            result.pass = false;
        }
    }
    return result;
}

}  // namespace causalsig
