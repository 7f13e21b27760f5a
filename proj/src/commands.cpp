#include "causalsig/commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "causalsig/csv_io.hpp"
#include "causalsig/errors.hpp"

namespace causalsig {
namespace {

namespace fs = std::filesystem;

constexpr const char* kNoCostsDisclaimer =
    "# Results exclude transaction costs, spreads and slippage. Turnover is high, so even small\n"
    "# frictions would materially reduce net performance.\n";

// Files are rendered in memory first; if any write fails, everything already
// written by this instance is removed.
class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

    ~ArtifactWriter() {
        if (!committed_) {
            std::error_code ec;
            for (const auto& p : written_) fs::remove(p, ec);
        }
    }

    void add(const std::string& name, std::function<void(std::ostream&)> render) {
        pending_.emplace_back(name, std::move(render));
    }

    void commit() {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
        for (const auto& [name, render] : pending_) {
            const auto path = dir_ / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw ConfigError("cannot write '" + path.string() + "'");
            written_.push_back(path);
            render(out);
            out.flush();
            if (!out) throw ConfigError("failed while writing '" + path.string() + "'");
        }
        committed_ = true;
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::function<void(std::ostream&)>>> pending_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

RunArtifacts run_from_config(std::span<const Bar> bars, const RunConfig& cfg) {
    return run_pipeline(bars, cfg.indicators, cfg.pipeline, cfg.decision);
}

void write_metrics(std::ostream& out, const RunConfig& cfg, const LoadedBars& loaded, const RunArtifacts& art,
                   const RegimeReport& overall, std::span<const RegimeReport> regimes) {
    out << kNoCostsDisclaimer;
    out << "bars_input = " << loaded.input_count << "\n";
    out << "bars_session = " << loaded.session.size() << "\n";
    out << "bars_valid = " << art.positions.size() << "\n";
    out << "theta = " << format_double(cfg.decision.theta) << "\n";
    out << "start = " << format_iso8601(art.times.front()) << "\n";
    out << "end = " << format_iso8601(art.times.back()) << "\n";
    out << "end_v = " << format_double(overall.end_v) << "\n";
    out << "cum_ret_pct = " << format_double(overall.cum_ret_pct) << "\n";
    out << "mdd_pct = " << format_double(overall.mdd_pct) << "\n";
    out << "trades_total = " << art.equity.back().trades_cum << "\n";
    out << "trades_per_month = " << format_double(overall.trades_per_month) << "\n";
    const double bench = art.equity.back().v_bench;
    out << "bench_end_v = " << format_double(bench) << "\n";
    out << "bench_cum_ret_pct = " << format_double(100.0 * (bench - 1.0)) << "\n";
    out << "regimes = " << regimes.size() << "\n";
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        const std::string prefix = "regime." + std::to_string(i + 1) + ".";
        out << prefix << "period = " << regimes[i].period << "\n";
        out << prefix << "end_v = " << format_double(regimes[i].end_v) << "\n";
        out << prefix << "cum_ret_pct = " << format_double(regimes[i].cum_ret_pct) << "\n";
        out << prefix << "mdd_pct = " << format_double(regimes[i].mdd_pct) << "\n";
        out << prefix << "trades_per_month = " << format_double(regimes[i].trades_per_month) << "\n";
    }
}

}  // namespace

LoadedBars load_session_bars(const RunConfig& cfg) {
    LoadedBars loaded;
    const auto raw = parse_bars_file(cfg.input_path, cfg.columns);
    loaded.input_count = raw.size();
    loaded.session = filter_sessions(raw, cfg.session);
    if (loaded.session.empty()) throw DataError("no bars survive session filter");
    return loaded;
}

void cmd_run(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const SessionCalendar calendar(cfg.session);  // surfaces timezone errors before reading data
    const auto loaded = load_session_bars(cfg);
    const auto art = run_from_config(loaded.session, cfg);
    if (art.equity.empty()) throw DataError("fewer than two bars remain after indicator warm-up");

    const auto overall = regime_report(art.equity, art.times.front(), {}, cfg.regimes).front();
    const auto regimes = regime_report(art.equity, art.times.front(), cfg.splits, cfg.regimes);

    ArtifactWriter writer(cfg.output_dir);
    writer.add("trace.csv", [&](std::ostream& o) { write_trace_csv(o, art.trace); });
    writer.add("positions.csv", [&](std::ostream& o) { write_positions_csv(o, art.times, art.positions); });
    writer.add("equity.csv", [&](std::ostream& o) { write_equity_csv(o, art.equity); });
    writer.add("regimes.csv", [&](std::ostream& o) { write_regimes_csv(o, regimes); });
    writer.add("metrics.txt", [&](std::ostream& o) { write_metrics(o, cfg, loaded, art, overall, regimes); });
    writer.add("effective_config.ini", [&](std::ostream& o) { o << render_run_config(cfg); });
    writer.commit();

    log << kNoCostsDisclaimer;
    log << "bars: " << loaded.input_count << " input, " << loaded.session.size() << " in session, "
        << art.positions.size() << " with signal\n";
    log << format_regime_table(regimes);
    log << "benchmark end V: " << format_double(art.equity.back().v_bench) << "\n";
}

AuditResult cmd_audit_causality(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto loaded = load_session_bars(cfg);
    const PipelineRunner runner = [&cfg](std::span<const Bar> bars) { return run_from_config(bars, cfg); };
    auto result = audit_causality(loaded.session, runner, cfg.cuts, cfg.seed);
    for (const auto& w : result.warnings) log << "warning: " << w << "\n";
    if (result.pass) {
        log << "PASS: " << result.cuts_checked << " prefixes of " << loaded.session.size()
            << " bars reproduce the full run bit for bit (seed " << cfg.seed << ")\n";
    } else {
        log << "FAIL: prefix of " << result.prefix_length << " bars diverges at "
            << format_iso8601(*result.divergent_timestamp) << " in column " << result.divergent_column << "\n";
    }
    return result;
}

void cmd_diagnose_shifts(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (cfg.shifts.empty()) throw ConfigError("at least one diagnostic shift is required");
    const auto loaded = load_session_bars(cfg);
    const auto art = run_from_config(loaded.session, cfg);
    if (art.closes.size() < 2) throw DataError("fewer than two bars remain after indicator warm-up");
    const auto curves = forward_shift_diagnostic(art.signal, art.closes, cfg.shifts, cfg.decision);

    ArtifactWriter writer(cfg.output_dir);
    writer.add("shifts.csv", [&](std::ostream& o) { write_shifts_csv(o, art.times, curves); });
    writer.commit();

    log << "NON-CAUSAL diagnostic (signal advanced in time; evaluation only)\n";
    for (const auto& c : curves) {
        log << "shift " << c.shift << ": end V = "
            << (c.equity.empty() ? std::string("n/a") : format_double(c.equity.back().v)) << "\n";
    }
}

}  // namespace causalsig
