#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lifelog {

// Calendar date with day resolution.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  // Throws ConfigError on an invalid calendar date.
  static Date from_ymd(int year, unsigned month, unsigned day);
  static Date from_serial(std::int32_t serial) { return Date(std::chrono::sys_days{std::chrono::days{serial}}); }

  // YYYY-MM-DD
  static std::optional<Date> parse_iso(std::string_view text);
  // YYYY/MM/DD
  static std::optional<Date> parse_slashed(std::string_view text);

  int year() const;
  unsigned month() const;
  unsigned day() const;
  std::int32_t serial() const { return static_cast<std::int32_t>(days_.time_since_epoch().count()); }
  std::chrono::sys_days sys_days() const { return days_; }

  Date plus_days(int n) const { return Date(days_ + std::chrono::days{n}); }
  // Same month/day `n` years later; Feb 29 maps to Feb 28 in non-leap years.
  Date plus_years(int n) const;
  // 0 = Monday .. 6 = Sunday
  unsigned iso_weekday_index() const;

  std::string iso() const;
  std::string slashed() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
  friend constexpr bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

// Inclusive range of days.
struct DateRange {
  Date first;
  Date last;

  bool valid() const { return first <= last; }
  bool contains(Date d) const { return first <= d && d <= last; }
  int days() const { return last.serial() - first.serial() + 1; }

  friend bool operator==(const DateRange&, const DateRange&) = default;
};

// Completed years between `birth` and `on`.
int age_on(Date birth, Date on);
bool is_leap_year(int year);
int days_in_month(int year, unsigned month);
DateRange year_range(int year);
DateRange month_range(int year, unsigned month);

const char* month_name(unsigned month);

}  // namespace lifelog
