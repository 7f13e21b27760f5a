#include "causalsig/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string_view>

#include "causalsig/errors.hpp"

namespace causalsig {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

std::size_t find_column(const std::vector<std::string_view>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing column '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

bool bar_is_well_formed(const Bar& bar) {
    return bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0 && bar.volume >= 0.0 &&
           bar.low <= std::min(bar.open, bar.close) && bar.high >= std::max(bar.open, bar.close);
}

std::vector<Bar> parse_bars(std::istream& source, const ColumnMapping& mapping) {
    std::string line;
    std::size_t line_no = 0;

    std::string header_line;
    while (std::getline(source, header_line)) {
        ++line_no;
        if (!is_blank(header_line)) break;
    }
    if (is_blank(header_line)) throw DataError("input has no header row");
    const auto header = split_fields(header_line);
    const std::size_t i_ts = find_column(header, mapping.timestamp);
    const std::size_t i_open = find_column(header, mapping.open);
    const std::size_t i_high = find_column(header, mapping.high);
    const std::size_t i_low = find_column(header, mapping.low);
    const std::size_t i_close = find_column(header, mapping.close);
    const std::size_t i_volume = find_column(header, mapping.volume);

    std::vector<Bar> bars;
    std::optional<TimestampFormat> format;
    while (std::getline(source, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DataError("malformed row" + at_line(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }

        const auto ts_text = fields[i_ts];
        if (!format) {
            format = detect_timestamp_format(ts_text);
            if (!format) {
                throw DataError("unknown timestamp format" + at_line(line_no) + ": '" + std::string(ts_text) + "'");
            }
        }
        const auto ts = parse_timestamp(ts_text, *format);
        if (!ts) {
            if (detect_timestamp_format(ts_text)) {
                throw DataError("mixed timestamp formats" + at_line(line_no) + ": '" + std::string(ts_text) + "'");
            }
            throw DataError("unknown timestamp format" + at_line(line_no) + ": '" + std::string(ts_text) + "'");
        }

        Bar bar;
        bar.timestamp = *ts;
        const std::pair<std::size_t, double*> numeric[] = {
            {i_open, &bar.open}, {i_high, &bar.high}, {i_low, &bar.low},
            {i_close, &bar.close}, {i_volume, &bar.volume}};
        for (const auto& [index, target] : numeric) {
            const auto value = parse_double(fields[index]);
            if (!value) {
                throw DataError("malformed row" + at_line(line_no) + ": bad number '" + std::string(fields[index]) +
                                "' in column '" + std::string(header[index]) + "'");
            }
            *target = *value;
        }

        if (bar.open <= 0.0 || bar.high <= 0.0 || bar.low <= 0.0 || bar.close <= 0.0) {
            throw DataError("non-positive price" + at_line(line_no));
        }
        if (bar.volume < 0.0) throw DataError("negative volume" + at_line(line_no));
        if (!bar_is_well_formed(bar)) {
            throw DataError("inconsistent OHLC (low/high do not bracket open/close)" + at_line(line_no));
        }
        if (!bars.empty()) {
            const auto prev = bars.back().timestamp;
            if (bar.timestamp == prev) {
                throw DataError("duplicate timestamp " + format_iso8601(prev) + at_line(line_no));
            }
            if (bar.timestamp < prev) {
                throw DataError("non-monotone timestamps" + at_line(line_no) + ": " + format_iso8601(prev) +
                                " followed by " + format_iso8601(bar.timestamp));
            }
        }
        bars.push_back(bar);
    }
    return bars;
}

std::vector<Bar> parse_bars_file(const std::string& path, const ColumnMapping& mapping) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return parse_bars(in, mapping);
}

SessionCalendar::SessionCalendar(SessionPolicy policy) : policy_(std::move(policy)) {
    if (policy_.timezone.empty()) throw ConfigError("session timezone is required");
    if (!absl::LoadTimeZone(policy_.timezone, &zone_)) {
        throw ConfigError("unknown timezone '" + policy_.timezone + "'");
    }
    for (const auto* b : {&policy_.weekend_open, &policy_.weekend_close}) {
        if (!b->day.ok() || b->time_of_day < std::chrono::minutes{0} || b->time_of_day >= std::chrono::hours{24}) {
            throw ConfigError("session boundary is not a valid day and time of day");
        }
    }
}

bool SessionCalendar::keep(Timestamp ts) const {
    const auto ms = ts.time_since_epoch().count();
    const auto civil = absl::ToCivilSecond(absl::FromUnixMillis(ms), zone_);
    const auto wd = absl::GetWeekday(absl::CivilDay(civil));
    // absl::Weekday starts at Monday; chrono::weekday counts Sunday as 0.
    const std::chrono::weekday day{(static_cast<unsigned>(wd) + 1) % 7};

    const auto local_ms = std::chrono::milliseconds{
        (static_cast<long long>(civil.hour()) * 3600 + civil.minute() * 60 + civil.second()) * 1000 +
        ((ms % 1000) + 1000) % 1000};

    if (policy_.saturday_drop && day == std::chrono::Saturday) return false;
    if (day == policy_.weekend_open.day && local_ms < policy_.weekend_open.time_of_day) return false;
    if (day == policy_.weekend_close.day && local_ms > policy_.weekend_close.time_of_day) return false;
    return true;
}

bool session_keep(const Bar& bar, const SessionPolicy& policy) {
    return SessionCalendar(policy).keep(bar.timestamp);
}

std::vector<Bar> filter_sessions(std::span<const Bar> bars, const SessionPolicy& policy) {
    const SessionCalendar calendar(policy);
    std::vector<Bar> out;
    out.reserve(bars.size());
    std::copy_if(bars.begin(), bars.end(), std::back_inserter(out),
                 [&](const Bar& b) { return calendar.keep(b.timestamp); });
    return out;
}

}  // namespace causalsig
