#pragma once

#include <compare>
#include <string>
#include <vector>

namespace din {

// Calendar date stored as days since 1970-01-01 (may be negative).
class Date {
public:
    Date() = default;
    explicit Date(int serial) : serial_(serial) {}
    Date(int year, int month, int day);

    static Date parse(const std::string& iso);  // "YYYY-MM-DD"
    static bool try_parse(const std::string& iso, Date& out);

    int serial() const { return serial_; }
    int year() const;
    int month() const;   // 1..12
    int day() const;     // 1..31
    int weekday() const; // 0 = Monday .. 6 = Sunday
    int day_of_year() const;  // 1..366
    int week_of_year() const; // 1..53, (day_of_year-1)/7 + 1
    bool is_weekend() const { return weekday() >= 5; }

    Date add_days(int n) const { return Date(serial_ + n); }
    Date add_years(int n) const;
    std::string to_string() const;

    auto operator<=>(const Date&) const = default;

private:
    int serial_ = 0;
};

inline int operator-(const Date& a, const Date& b) { return a.serial() - b.serial(); }

struct DateSpan {
    Date begin;  // inclusive
    Date end;    // exclusive
    bool contains(const Date& d) const { return begin <= d && d < end; }
};

// Consecutive weekdays starting at `start` (start shifted to the next weekday if needed).
std::vector<Date> weekday_calendar(Date start, int n_days);

}  // namespace din
