#include "linkwatch/core/time.hpp"

#include <cstdio>

#include "linkwatch/core/error.hpp"

namespace linkwatch {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kInputMissing: return "input_missing";
    case ErrorKind::kSchemaViolation: return "schema_violation";
    case ErrorKind::kInvariantViolation: return "invariant_violation";
    case ErrorKind::kSchemaMismatch: return "schema_mismatch";
    case ErrorKind::kProviderFailure: return "provider_failure";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

namespace {

using namespace std::chrono;

[[noreturn]] void bad(std::string_view what, std::string_view text) {
  fail(ErrorKind::kSchemaViolation,
       std::string(what) + ": '" + std::string(text) + "'");
}

int digits(std::string_view text, std::size_t pos, std::size_t count,
           std::string_view what) {
  if (pos + count > text.size()) bad(what, text);
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') bad(what, text);
    value = value * 10 + (c - '0');
  }
  return value;
}

Date checked_date(std::string_view text, std::size_t pos,
                  std::string_view what) {
  int y = digits(text, pos, 4, what);
  if (text.size() < pos + 10 || text[pos + 4] != '-' || text[pos + 7] != '-')
    bad(what, text);
  int m = digits(text, pos + 5, 2, what);
  int d = digits(text, pos + 8, 2, what);
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad(what, text);
  return sys_days{ymd};
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  constexpr std::string_view kWhat = "invalid RFC 3339 timestamp";
  Date date = checked_date(text, 0, kWhat);
  if (text.size() < 20 || (text[10] != 'T' && text[10] != 't' &&
                           text[10] != ' '))
    bad(kWhat, text);
  if (text[13] != ':' || text[16] != ':') bad(kWhat, text);
  int hh = digits(text, 11, 2, kWhat);
  int mm = digits(text, 14, 2, kWhat);
  int ss = digits(text, 17, 2, kWhat);
  if (hh > 23 || mm > 59 || ss > 60) bad(kWhat, text);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) bad(kWhat, text);
  }
  if (pos >= text.size()) bad(kWhat, text);
  seconds offset{0};
  char zone = text[pos];
  if (zone == 'Z' || zone == 'z') {
    ++pos;
  } else if (zone == '+' || zone == '-') {
    if (text.size() < pos + 6 || text[pos + 3] != ':') bad(kWhat, text);
    int oh = digits(text, pos + 1, 2, kWhat);
    int om = digits(text, pos + 4, 2, kWhat);
    if (oh > 23 || om > 59) bad(kWhat, text);
    offset = hours{oh} + minutes{om};
    if (zone == '-') offset = -offset;
    pos += 6;
  } else {
    bad(kWhat, text);
  }
  if (pos != text.size()) bad(kWhat, text);
  // Leap second 60 folds into the next minute.
  return Timestamp{date} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_timestamp(Timestamp ts) {
  Date day_start = floor<days>(ts);
  year_month_day ymd{day_start};
  hh_mm_ss<seconds> tod{ts - day_start};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

Date parse_date(std::string_view text) {
  constexpr std::string_view kWhat = "invalid date (want YYYY-MM-DD)";
  Date d = checked_date(text, 0, kWhat);
  if (text.size() != 10) bad(kWhat, text);
  return d;
}

std::string format_date(Date d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::int64_t floor_days(std::chrono::seconds elapsed) {
  return floor<days>(elapsed).count();
}

int utc_hour(Timestamp ts) {
  hh_mm_ss<seconds> tod{ts - floor<days>(ts)};
  return static_cast<int>(tod.hours().count());
}

int utc_minute(Timestamp ts) {
  hh_mm_ss<seconds> tod{ts - floor<days>(ts)};
  return static_cast<int>(tod.minutes().count());
}

YearMonth YearMonth::from_index(int index) {
  int year = index >= 0 ? index / 12 : -((-index + 11) / 12);
  int month0 = index - year * 12;
  return YearMonth{year, static_cast<unsigned>(month0 + 1)};
}

std::string YearMonth::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", year, month);
  return buf;
}

YearMonth year_month_of(Timestamp ts) {
  year_month_day ymd{floor<days>(ts)};
  return YearMonth{static_cast<int>(ymd.year()),
                   static_cast<unsigned>(ymd.month())};
}

}  // namespace linkwatch
