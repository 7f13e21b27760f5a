#include "causalsig/timestamp.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace causalsig {
namespace {

using namespace std::chrono;

bool read_fixed(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) return false;
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
    return ec == std::errc{} && ptr == text.data() + pos + width;
}

bool expect(std::string_view text, std::size_t pos, char c) {
    return pos < text.size() && text[pos] == c;
}

}  // namespace

std::optional<TimestampFormat> detect_timestamp_format(std::string_view text) {
    if (parse_epoch_ms(text)) return TimestampFormat::epoch_ms;
    if (parse_iso8601(text)) return TimestampFormat::iso8601;
    return std::nullopt;
}

std::optional<Timestamp> parse_epoch_ms(std::string_view text) {
    if (text.empty()) return std::nullopt;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return Timestamp{milliseconds{value}};
}

std::optional<Timestamp> parse_iso8601(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!read_fixed(text, 0, 4, y) || !expect(text, 4, '-') || !read_fixed(text, 5, 2, mo) ||
        !expect(text, 7, '-') || !read_fixed(text, 8, 2, d)) {
        return std::nullopt;
    }
    if (!(expect(text, 10, 'T') || expect(text, 10, ' '))) return std::nullopt;
    if (!read_fixed(text, 11, 2, h) || !expect(text, 13, ':') || !read_fixed(text, 14, 2, mi) ||
        !expect(text, 16, ':') || !read_fixed(text, 17, 2, s)) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    int millis = 0;
    if (expect(text, pos, '.')) {
        ++pos;
        int digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (digits < 3) millis = millis * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0) return std::nullopt;
        for (int k = digits; k < 3; ++k) millis *= 10;
    }
    int offset_minutes = 0;
    if (pos < text.size()) {
        if (text[pos] == 'Z' && pos + 1 == text.size()) {
            ++pos;
        } else if (text[pos] == '+' || text[pos] == '-') {
            const int sign = text[pos] == '-' ? -1 : 1;
            int oh = 0, om = 0;
            if (!read_fixed(text, pos + 1, 2, oh) || !expect(text, pos + 3, ':') ||
                !read_fixed(text, pos + 4, 2, om) || pos + 6 != text.size()) {
                return std::nullopt;
            }
            if (oh > 23 || om > 59) return std::nullopt;
            offset_minutes = sign * (oh * 60 + om);
            pos += 6;
        } else {
            return std::nullopt;
        }
    }
    if (pos != text.size()) return std::nullopt;

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;

    const auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis};
    return Timestamp{local - minutes{offset_minutes}};
}

std::optional<Timestamp> parse_timestamp(std::string_view text, TimestampFormat format) {
    return format == TimestampFormat::epoch_ms ? parse_epoch_ms(text) : parse_iso8601(text);
}

std::optional<Timestamp> parse_any_timestamp(std::string_view text) {
    if (auto ts = parse_iso8601(text)) return ts;
    return parse_epoch_ms(text);
}

std::string format_iso8601(Timestamp ts) {
    const auto day_point = floor<days>(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss<milliseconds> tod{ts - day_point};
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d",
                                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                                static_cast<unsigned>(ymd.day()), static_cast<int>(tod.hours().count()),
                                static_cast<int>(tod.minutes().count()),
                                static_cast<int>(tod.seconds().count()));
    std::string out(buf, static_cast<std::size_t>(n));
    if (const auto ms = tod.subseconds().count(); ms != 0) {
        std::snprintf(buf, sizeof buf, ".%03d", static_cast<int>(ms));
        out += buf;
    }
    out += "+00:00";
    return out;
}

}  // namespace causalsig
