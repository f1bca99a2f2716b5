#include "lifelog/date.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "lifelog/error.hpp"

namespace lifelog {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;

std::optional<Date> parse_with(std::string_view text, char sep) {
  if (text.size() != 10 || text[4] != sep || text[7] != sep) return std::nullopt;
  auto number = [&](std::size_t pos, std::size_t len, int& out) {
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return false;
    }
    auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return res.ec == std::errc{};
  };
  int y = 0;
  int m = 0;
  int d = 0;
  if (!number(0, 4, y) || !number(5, 2, m) || !number(8, 2, d)) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date(std::chrono::sys_days{ymd});
}

std::string format_with(const Date& date, char sep) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%c%02u%c%02u", date.year(), sep, date.month(), sep, date.day());
  return buf;
}

}  // namespace

Date Date::from_ymd(int y, unsigned m, unsigned d) {
  const year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) {
    throw ConfigError("invalid date " + std::to_string(y) + "-" + std::to_string(m) + "-" + std::to_string(d));
  }
  return Date(std::chrono::sys_days{ymd});
}

std::optional<Date> Date::parse_iso(std::string_view text) { return parse_with(text, '-'); }
std::optional<Date> Date::parse_slashed(std::string_view text) { return parse_with(text, '/'); }

int Date::year() const { return static_cast<int>(year_month_day{days_}.year()); }
unsigned Date::month() const { return static_cast<unsigned>(year_month_day{days_}.month()); }
unsigned Date::day() const { return static_cast<unsigned>(year_month_day{days_}.day()); }

Date Date::plus_years(int n) const {
  const year_month_day ymd{days_};
  year_month_day moved{ymd.year() + std::chrono::years{n}, ymd.month(), ymd.day()};
  if (!moved.ok()) moved = year_month_day{moved.year(), moved.month(), std::chrono::day{28}};
  return Date(std::chrono::sys_days{moved});
}

unsigned Date::iso_weekday_index() const {
  return (std::chrono::weekday{days_}.iso_encoding() + 6) % 7;
}

std::string Date::iso() const { return format_with(*this, '-'); }
std::string Date::slashed() const { return format_with(*this, '/'); }

int age_on(Date birth, Date on) {
  int age = on.year() - birth.year();
  if (on.month() < birth.month() || (on.month() == birth.month() && on.day() < birth.day())) --age;
  return age;
}

bool is_leap_year(int y) { return year{y}.is_leap(); }

int days_in_month(int y, unsigned m) {
  const std::chrono::year_month_day_last last{year{y}, std::chrono::month_day_last{month{m}}};
  return static_cast<int>(static_cast<unsigned>(last.day()));
}

DateRange year_range(int y) { return {Date::from_ymd(y, 1, 1), Date::from_ymd(y, 12, 31)}; }

DateRange month_range(int y, unsigned m) {
  return {Date::from_ymd(y, m, 1), Date::from_ymd(y, m, static_cast<unsigned>(days_in_month(y, m)))};
}

const char* month_name(unsigned m) {
  static constexpr std::array<const char*, 12> kNames = {"January", "February", "March",     "April",
                                                         "May",     "June",     "July",      "August",
                                                         "September", "October", "November", "December"};
  return (m >= 1 && m <= 12) ? kNames[m - 1] : "?";
}

}  // namespace lifelog
