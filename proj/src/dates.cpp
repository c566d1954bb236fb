#include "din/dates.hpp"

#include <array>
#include <cstdio>

#include "din/core.hpp"

namespace din {

namespace {

// Days-from-civil / civil-from-days (proleptic Gregorian).
int days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

std::array<int, 3> civil_from_days(int z) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), static_cast<int>(m), static_cast<int>(d)};
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

}  // namespace

Date::Date(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month))
        throw data_error("invalid date " + std::to_string(year) + "-" + std::to_string(month) +
                         "-" + std::to_string(day));
    serial_ = days_from_civil(year, month, day);
}

bool Date::try_parse(const std::string& iso, Date& out) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) != 3) return false;
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return false;
    out = Date(y, m, d);
    return true;
}

Date Date::parse(const std::string& iso) {
    Date d;
    if (!try_parse(iso, d)) throw data_error("unparsable date '" + iso + "'");
    return d;
}

int Date::year() const { return civil_from_days(serial_)[0]; }
int Date::month() const { return civil_from_days(serial_)[1]; }
int Date::day() const { return civil_from_days(serial_)[2]; }

int Date::weekday() const {
    // 1970-01-01 was a Thursday (Monday=0 -> 3).
    int w = (serial_ + 3) % 7;
    return w < 0 ? w + 7 : w;
}

int Date::day_of_year() const {
    auto [y, m, d] = civil_from_days(serial_);
    return serial_ - days_from_civil(y, 1, 1) + 1;
}

int Date::week_of_year() const { return (day_of_year() - 1) / 7 + 1; }

Date Date::add_years(int n) const {
    auto [y, m, d] = civil_from_days(serial_);
    y += n;
    if (d > days_in_month(y, m)) d = days_in_month(y, m);
    return Date(y, m, d);
}

std::string Date::to_string() const {
    auto [y, m, d] = civil_from_days(serial_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::vector<Date> weekday_calendar(Date start, int n_days) {
    std::vector<Date> out;
    out.reserve(static_cast<std::size_t>(n_days));
    Date d = start;
    while (d.is_weekend()) d = d.add_days(1);
    while (static_cast<int>(out.size()) < n_days) {
        out.push_back(d);
        do {
            d = d.add_days(1);
        } while (d.is_weekend());
    }
    return out;
}

}  // namespace din
