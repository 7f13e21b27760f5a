#pragma once

#include <chrono>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/time/time.h"
#include "causalsig/timestamp.hpp"

namespace causalsig {

struct Bar {
    Timestamp timestamp;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

// Header names for each field in the input CSV.
struct ColumnMapping {
    std::string timestamp = "timestamp";
    std::string open = "open";
    std::string high = "high";
    std::string low = "low";
    std::string close = "close";
    std::string volume = "volume";
};

// Reads a header row followed by one bar per line. Timestamps are ISO-8601 or
// epoch milliseconds, detected from the first data row and required to stay
// uniform. Throws DataError naming the offending line on any violation of the
// Bar invariants, on duplicate or decreasing timestamps, and on unknown formats.
std::vector<Bar> parse_bars(std::istream& source, const ColumnMapping& mapping = {});
std::vector<Bar> parse_bars_file(const std::string& path, const ColumnMapping& mapping = {});

// Checks OHLC ordering, positivity and non-negative volume.
bool bar_is_well_formed(const Bar& bar);

// A weekday plus a time of day in the session's local clock.
struct WeeklyBoundary {
    std::chrono::weekday day;
    std::chrono::minutes time_of_day;
};

// Active-hours rule applied before any indicator sees the data. Bars on the
// open day strictly before `weekend_open` are dropped; bars on the close day
// strictly after `weekend_close` are dropped; the boundary minutes are kept.
struct SessionPolicy {
    std::string timezone;  // IANA identifier, e.g. "America/New_York"; required
    WeeklyBoundary weekend_open{std::chrono::Sunday, std::chrono::hours{18}};
    WeeklyBoundary weekend_close{std::chrono::Friday, std::chrono::hours{18}};
    bool saturday_drop = true;
};

// SessionPolicy with its timezone resolved. Throws ConfigError when the
// timezone cannot be loaded or a boundary is not a valid time of day.
class SessionCalendar {
public:
    explicit SessionCalendar(SessionPolicy policy);

    bool keep(Timestamp ts) const;
    const SessionPolicy& policy() const { return policy_; }

private:
    SessionPolicy policy_;
    absl::TimeZone zone_;
};

bool session_keep(const Bar& bar, const SessionPolicy& policy);

// Surviving bars keep their order and are treated as adjacent downstream.
std::vector<Bar> filter_sessions(std::span<const Bar> bars, const SessionPolicy& policy);

}  // namespace causalsig
