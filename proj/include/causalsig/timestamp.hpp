#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace causalsig {

// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class TimestampFormat { iso8601, epoch_ms };

// Guess the format of a single timestamp field; nullopt if neither fits.
std::optional<TimestampFormat> detect_timestamp_format(std::string_view text);

// Accepts `YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|±hh:mm]`. A missing offset means UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

std::optional<Timestamp> parse_epoch_ms(std::string_view text);

std::optional<Timestamp> parse_timestamp(std::string_view text, TimestampFormat format);

// Either format, detected from the text itself.
std::optional<Timestamp> parse_any_timestamp(std::string_view text);

// `YYYY-MM-DDTHH:MM:SS+00:00`, with `.mmm` appended to the seconds when non-zero.
std::string format_iso8601(Timestamp ts);

}  // namespace causalsig
