#include "causalsig/run_config.hpp"

#include <array>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "causalsig/csv_io.hpp"
#include "causalsig/errors.hpp"

namespace causalsig {
namespace {

namespace pt = boost::property_tree;

constexpr std::array<const char*, 7> kDayNames = {"Sunday", "Monday", "Tuesday", "Wednesday",
                                                  "Thursday", "Friday", "Saturday"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("invalid value '" + text + "' for " + key);
    }
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("invalid boolean '" + text + "' for " + key);
}

std::string join_timestamps(const std::vector<Timestamp>& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ",";
        out += format_iso8601(ts[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

using Setter = void (*)(RunConfig&, const std::string& key, const std::string& value);

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"input.path", [](RunConfig& c, const std::string&, const std::string& v) { c.input_path = trim(v); }},
        {"input.timestamp_column", [](RunConfig& c, const std::string&, const std::string& v) { c.columns.timestamp = trim(v); }},
        {"input.open_column", [](RunConfig& c, const std::string&, const std::string& v) { c.columns.open = trim(v); }},
        {"input.high_column", [](RunConfig& c, const std::string&, const std::string& v) { c.columns.high = trim(v); }},
        {"input.low_column", [](RunConfig& c, const std::string&, const std::string& v) { c.columns.low = trim(v); }},
        {"input.close_column", [](RunConfig& c, const std::string&, const std::string& v) { c.columns.close = trim(v); }},
        {"input.volume_column", [](RunConfig& c, const std::string&, const std::string& v) { c.columns.volume = trim(v); }},
        {"session.timezone", [](RunConfig& c, const std::string&, const std::string& v) { c.session.timezone = trim(v); }},
        {"session.weekend_open", [](RunConfig& c, const std::string&, const std::string& v) { c.session.weekend_open = parse_weekly_boundary(v); }},
        {"session.weekend_close", [](RunConfig& c, const std::string&, const std::string& v) { c.session.weekend_close = parse_weekly_boundary(v); }},
        {"session.saturday_drop", [](RunConfig& c, const std::string& k, const std::string& v) { c.session.saturday_drop = parse_bool(k, v); }},
        {"indicators.rsi_window", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.rsi_window = parse_number<int>(k, v); }},
        {"indicators.mfi_window", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.mfi_window = parse_number<int>(k, v); }},
        {"indicators.macd_fast", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.macd_fast = parse_number<int>(k, v); }},
        {"indicators.macd_slow", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.macd_slow = parse_number<int>(k, v); }},
        {"indicators.macd_signal", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.macd_signal = parse_number<int>(k, v); }},
        {"indicators.bb_window", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.bb_window = parse_number<int>(k, v); }},
        {"indicators.bb_k", [](RunConfig& c, const std::string& k, const std::string& v) { c.indicators.bb_k = parse_number<double>(k, v); }},
        {"pipeline.alpha_mfi", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.alpha_mfi = parse_number<double>(k, v); }},
        {"pipeline.alpha_rsi", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.alpha_rsi = parse_number<double>(k, v); }},
        {"pipeline.alpha_bb", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.alpha_bb = parse_number<double>(k, v); }},
        {"pipeline.alpha_macd", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.alpha_macd = parse_number<double>(k, v); }},
        {"pipeline.kalman_q", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.kalman_q = parse_number<double>(k, v); }},
        {"pipeline.kalman_r", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.kalman_r = parse_number<double>(k, v); }},
        {"pipeline.derivative_span", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.derivative_span = parse_number<int>(k, v); }},
        {"pipeline.derivative_gain", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.derivative_gain = parse_number<double>(k, v); }},
        {"pipeline.forward_uses_filtered", [](RunConfig& c, const std::string& k, const std::string& v) { c.pipeline.forward_uses_filtered = parse_bool(k, v); }},
        {"decision.theta", [](RunConfig& c, const std::string& k, const std::string& v) { c.decision.theta = parse_number<double>(k, v); }},
        {"backtest.days_per_month", [](RunConfig& c, const std::string& k, const std::string& v) { c.regimes.days_per_month = parse_number<double>(k, v); }},
        {"backtest.splits", [](RunConfig& c, const std::string&, const std::string& v) {
             c.splits.clear();
             for (const auto& item : split_list(v)) {
                 const auto ts = parse_any_timestamp(item);
                 if (!ts) throw ConfigError("invalid split datetime '" + item + "'");
                 c.splits.push_back(*ts);
             }
         }},
        {"diagnostics.shifts", [](RunConfig& c, const std::string&, const std::string& v) { c.shifts = parse_shift_list(v); }},
        {"audit.cuts", [](RunConfig& c, const std::string& k, const std::string& v) { c.cuts = parse_number<int>(k, v); }},
        {"audit.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_number<std::uint64_t>(k, v); }},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }},
    };
    return table;
}

}  // namespace

WeeklyBoundary parse_weekly_boundary(const std::string& text) {
    std::istringstream in(text);
    std::string day_name, clock;
    if (!(in >> day_name >> clock)) throw ConfigError("invalid weekly boundary '" + text + "'");
    std::string rest;
    if (in >> rest) throw ConfigError("invalid weekly boundary '" + text + "'");
    int day_index = -1;
    for (std::size_t i = 0; i < kDayNames.size(); ++i) {
        if (day_name == kDayNames[i]) day_index = static_cast<int>(i);
    }
    if (day_index < 0) throw ConfigError("unknown weekday '" + day_name + "'");
    int h = -1, m = -1;
    if (clock.size() != 5 || clock[2] != ':' ||
        std::from_chars(clock.data(), clock.data() + 2, h).ptr != clock.data() + 2 ||
        std::from_chars(clock.data() + 3, clock.data() + 5, m).ptr != clock.data() + 5 || h < 0 || h > 23 ||
        m < 0 || m > 59) {
        throw ConfigError("invalid time of day '" + clock + "'");
    }
    return {std::chrono::weekday{static_cast<unsigned>(day_index)}, std::chrono::hours{h} + std::chrono::minutes{m}};
}

std::string format_weekly_boundary(const WeeklyBoundary& b) {
    const auto total = b.time_of_day.count();
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", static_cast<int>(total / 60), static_cast<int>(total % 60));
    return std::string(kDayNames[b.day.c_encoding()]) + " " + buf;
}

std::vector<int> parse_shift_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split_list(text)) {
        const int k = parse_number<int>("shifts", item);
        if (k < 0) throw ConfigError("diagnostic shifts must be non-negative, got " + item);
        out.push_back(k);
    }
    return out;
}

void RunConfig::validate() const {
    if (input_path.empty()) throw ConfigError("input path is required");
    if (session.timezone.empty()) throw ConfigError("session timezone is required");
    if (output_dir.empty()) throw ConfigError("output directory is required");
    indicators.validate();
    pipeline.validate();
    decision.validate();
    if (!(regimes.days_per_month > 0.0)) throw ConfigError("days_per_month must be positive");
    for (std::size_t i = 1; i < splits.size(); ++i) {
        if (splits[i] <= splits[i - 1]) throw ConfigError("regime splits must be strictly increasing");
    }
    for (const int k : shifts) {
        if (k < 0) throw ConfigError("diagnostic shifts must be non-negative");
    }
    if (cuts < 0) throw ConfigError("cuts must be non-negative");
}

RunConfig parse_run_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("config key '" + section + "' must live inside a section");
        }
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) throw ConfigError("unknown config key '" + full + "'");
            it->second(cfg, full, node.data());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_run_config(in);
}

std::string render_run_config(const RunConfig& c) {
    std::ostringstream o;
    o << "[input]\n"
      << "path = " << c.input_path << "\n"
      << "timestamp_column = " << c.columns.timestamp << "\n"
      << "open_column = " << c.columns.open << "\n"
      << "high_column = " << c.columns.high << "\n"
      << "low_column = " << c.columns.low << "\n"
      << "close_column = " << c.columns.close << "\n"
      << "volume_column = " << c.columns.volume << "\n\n"
      << "[session]\n"
      << "timezone = " << c.session.timezone << "\n"
      << "weekend_open = " << format_weekly_boundary(c.session.weekend_open) << "\n"
      << "weekend_close = " << format_weekly_boundary(c.session.weekend_close) << "\n"
      << "saturday_drop = " << (c.session.saturday_drop ? "true" : "false") << "\n\n"
      << "[indicators]\n"
      << "rsi_window = " << c.indicators.rsi_window << "\n"
      << "mfi_window = " << c.indicators.mfi_window << "\n"
      << "macd_fast = " << c.indicators.macd_fast << "\n"
      << "macd_slow = " << c.indicators.macd_slow << "\n"
      << "macd_signal = " << c.indicators.macd_signal << "\n"
      << "bb_window = " << c.indicators.bb_window << "\n"
      << "bb_k = " << format_double(c.indicators.bb_k) << "\n\n"
      << "[pipeline]\n"
      << "alpha_mfi = " << format_double(c.pipeline.alpha_mfi) << "\n"
      << "alpha_rsi = " << format_double(c.pipeline.alpha_rsi) << "\n"
      << "alpha_bb = " << format_double(c.pipeline.alpha_bb) << "\n"
      << "alpha_macd = " << format_double(c.pipeline.alpha_macd) << "\n"
      << "kalman_q = " << format_double(c.pipeline.kalman_q) << "\n"
      << "kalman_r = " << format_double(c.pipeline.kalman_r) << "\n"
      << "derivative_span = " << c.pipeline.derivative_span << "\n"
      << "derivative_gain = " << format_double(c.pipeline.derivative_gain) << "\n"
      << "forward_uses_filtered = " << (c.pipeline.forward_uses_filtered ? "true" : "false") << "\n\n"
      << "[decision]\n"
      << "theta = " << format_double(c.decision.theta) << "\n\n"
      << "[backtest]\n"
      << "days_per_month = " << format_double(c.regimes.days_per_month) << "\n"
      << "splits = " << join_timestamps(c.splits) << "\n\n"
      << "[diagnostics]\n"
      << "shifts = " << join_ints(c.shifts) << "\n\n"
      << "[audit]\n"
      << "cuts = " << c.cuts << "\n"
      << "seed = " << c.seed << "\n\n"
      << "[output]\n"
      << "dir = " << c.output_dir << "\n";
    return o.str();
}

}  // namespace causalsig
