#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace linkwatch {

// All instants are UTC with one-second resolution.
using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

// Accepts RFC 3339 date-times ("2013-10-05T03:14:00Z",
// "2013-10-05T08:44:00+05:30"). Fractional seconds are truncated.
// Throws Error(kSchemaViolation) on malformed input.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// "YYYY-MM-DD".
Date parse_date(std::string_view text);
std::string format_date(Date d);

// floor(elapsed / 86400 s), rounding toward negative infinity.
std::int64_t floor_days(std::chrono::seconds elapsed);

int utc_hour(Timestamp ts);
int utc_minute(Timestamp ts);

struct YearMonth {
  int year = 1970;
  unsigned month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  int index() const { return year * 12 + static_cast<int>(month) - 1; }
  static YearMonth from_index(int index);
  std::string to_string() const;  // "YYYY-MM"
};

YearMonth year_month_of(Timestamp ts);

}  // namespace linkwatch
