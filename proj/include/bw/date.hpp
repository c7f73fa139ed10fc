#pragma once

#include <string>

namespace bw {

/// Calendar date stored as a serial day count (days since 1970-01-01).
/// Accepts ISO-8601 "YYYY-MM-DD" and month granularity "YYYY-MM" or
/// "MM/YYYY"; month-granularity dates resolve to the first of the month.
class Date {
 public:
  Date() = default;
  explicit Date(long serial_day) : serial_(serial_day) {}

  static Date from_ymd(int year, int month, int day);
  static Date parse(const std::string& text);
  static bool try_parse(const std::string& text, Date& out);

  long serial() const { return serial_; }

  /// Date expressed in fractional calendar years (mean Gregorian year).
  double years() const { return static_cast<double>(serial_) / 365.2425; }

  std::string to_iso() const;

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  long serial_ = 0;
};

}  // namespace bw
