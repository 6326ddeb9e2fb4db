#include "stabaudit/timeutil.hpp"

#include <cctype>
#include <cstdio>

#include "stabaudit/errors.hpp"

namespace stabaudit {

namespace {

// Civil-date conversions after Howard Hinnant's algorithms; avoids any
// dependency on the process time zone.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += (m <= 2);
}

bool is_leap(std::int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

int digit(char c) { return c - '0'; }

bool all_digits(const std::string& s, size_t begin, size_t count) {
  if (begin + count > s.size()) return false;
  for (size_t i = begin; i < begin + count; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

[[noreturn]] void fail(const std::string& text) {
  throw AuditError(Errc::BadTimestamp, "not an RFC 3339 timestamp: '" + text + "'");
}

}  // namespace

Timestamp parse_rfc3339(const std::string& text) {
  // YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)
  if (text.size() < 20) fail(text);
  if (!all_digits(text, 0, 4) || text[4] != '-' || !all_digits(text, 5, 2) || text[7] != '-' ||
      !all_digits(text, 8, 2))
    fail(text);
  char sep = text[10];
  if (sep != 'T' && sep != 't' && sep != ' ') fail(text);
  if (!all_digits(text, 11, 2) || text[13] != ':' || !all_digits(text, 14, 2) ||
      text[16] != ':' || !all_digits(text, 17, 2))
    fail(text);

  const std::int64_t year = digit(text[0]) * 1000 + digit(text[1]) * 100 + digit(text[2]) * 10 + digit(text[3]);
  const unsigned month = digit(text[5]) * 10 + digit(text[6]);
  const unsigned day = digit(text[8]) * 10 + digit(text[9]);
  const int hour = digit(text[11]) * 10 + digit(text[12]);
  const int minute = digit(text[14]) * 10 + digit(text[15]);
  const int second = digit(text[17]) * 10 + digit(text[18]);

  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) fail(text);
  if (hour > 23 || minute > 59 || second > 60) fail(text);

  size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    size_t frac_len = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++frac_len;
    }
    if (frac_len == 0) fail(text);
  }
  if (pos >= text.size()) fail(text);

  std::int64_t offset_seconds = 0;
  if (text[pos] == 'Z' || text[pos] == 'z') {
    if (pos + 1 != text.size()) fail(text);
  } else if (text[pos] == '+' || text[pos] == '-') {
    if (pos + 6 != text.size() || !all_digits(text, pos + 1, 2) || text[pos + 3] != ':' ||
        !all_digits(text, pos + 4, 2))
      fail(text);
    const int oh = digit(text[pos + 1]) * 10 + digit(text[pos + 2]);
    const int om = digit(text[pos + 4]) * 10 + digit(text[pos + 5]);
    if (oh > 23 || om > 59) fail(text);
    offset_seconds = (oh * 3600 + om * 60) * (text[pos] == '+' ? 1 : -1);
  } else {
    fail(text);
  }

  const std::int64_t days = days_from_civil(year, month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second - offset_seconds;
}

std::string format_rfc3339(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t year = 0;
  unsigned month = 0, day = 0;
  civil_from_days(days, year, month, day);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), month, day,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace stabaudit
