#include "bw/date.hpp"

#include <cctype>
#include <cstdio>

#include "bw/errors.hpp"

namespace bw {

namespace {

// Days from civil algorithm (proleptic Gregorian), Howard Hinnant.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yr = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

bool valid_md(int month, int day) {
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
  if (!valid_md(month, day)) throw DataError("invalid date components");
  return Date(days_from_civil(year, month, day));
}

bool Date::try_parse(const std::string& text, Date& out) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &m, &d) == 3) {
    if (!valid_md(m, d)) return false;
    const long serial = days_from_civil(y, m, d);
    // Reject day overflow (e.g. February 30) via roundtrip.
    int ry, rm, rd;
    civil_from_days(serial, ry, rm, rd);
    if (ry != y || rm != m || rd != d) return false;
    out = Date(serial);
    return true;
  }
  if (std::sscanf(text.c_str(), "%d-%d", &y, &m) == 2 && y > 31) {
    if (m < 1 || m > 12) return false;
    out = Date(days_from_civil(y, m, 1));
    return true;
  }
  if (std::sscanf(text.c_str(), "%d/%d", &m, &y) == 2 && y > 31) {
    if (m < 1 || m > 12) return false;
    out = Date(days_from_civil(y, m, 1));
    return true;
  }
  return false;
}

Date Date::parse(const std::string& text) {
  Date d;
  if (!try_parse(text, d)) throw DataError("unparseable date: '" + text + "'");
  return d;
}

std::string Date::to_iso() const {
  int y, m, d;
  civil_from_days(serial_, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

}  // namespace bw
