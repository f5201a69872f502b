#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "ptx/errors.hpp"

namespace ptx {

/**
 * One civil timestamp on the hourly grid, stored as whole hours since
 * 1970-01-01T00:00:00Z. Everything inside the library runs on UTC hours;
 * fixed zone offsets are applied once at parse time and once at the
 * day-ahead boundary arithmetic, never stored.
 */
struct HourStamp {
    std::int64_t hours = 0;

    friend bool operator==(HourStamp a, HourStamp b) { return a.hours == b.hours; }
    friend bool operator!=(HourStamp a, HourStamp b) { return a.hours != b.hours; }
    friend bool operator<(HourStamp a, HourStamp b) { return a.hours < b.hours; }
    friend bool operator<=(HourStamp a, HourStamp b) { return a.hours <= b.hours; }
    friend bool operator>(HourStamp a, HourStamp b) { return a.hours > b.hours; }
    friend bool operator>=(HourStamp a, HourStamp b) { return a.hours >= b.hours; }

    HourStamp& operator+=(std::int64_t h) { hours += h; return *this; }
    friend HourStamp operator+(HourStamp a, std::int64_t h) { return {a.hours + h}; }
    friend HourStamp operator-(HourStamp a, std::int64_t h) { return {a.hours - h}; }
    friend std::int64_t operator-(HourStamp a, HourStamp b) { return a.hours - b.hours; }
};

struct CivilDate {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
};

namespace timeutil {

/** Days since 1970-01-01 for a proleptic Gregorian civil date. */
inline std::int64_t days_from_civil(int y, int m, int d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u
                         + static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

/** Inverse of days_from_civil. */
inline CivilDate civil_from_days(std::int64_t z)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

inline bool is_leap_year(int y)
{
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_year(int y) { return is_leap_year(y) ? 366 : 365; }

inline int days_in_month(int y, int m)
{
    static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return lengths[m - 1];
}

/** Floor division, correct for negative numerators. */
inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace timeutil

inline HourStamp make_hour(int year, int month, int day, int hour = 0)
{
    return {timeutil::days_from_civil(year, month, day) * 24 + hour};
}

inline CivilDate civil_date_of(HourStamp t)
{
    return timeutil::civil_from_days(timeutil::floor_div(t.hours, 24));
}

inline int hour_of_day(HourStamp t)
{
    return static_cast<int>(t.hours - timeutil::floor_div(t.hours, 24) * 24);
}

/** Zero-based day number within the stamp's calendar year. */
inline int day_of_year(HourStamp t)
{
    const CivilDate c = civil_date_of(t);
    return static_cast<int>(timeutil::floor_div(t.hours, 24)
                            - timeutil::days_from_civil(c.year, 1, 1));
}

/** Canonical form used in every CSV this library writes. */
inline std::string format_utc(HourStamp t)
{
    const CivilDate c = civil_date_of(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:00:00Z", c.year, c.month, c.day,
                  hour_of_day(t));
    return buf;
}

/** "YYYY-MM" key used for monthly grouping and ledger rows. */
inline std::string format_month(HourStamp t)
{
    const CivilDate c = civil_date_of(t);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", c.year, c.month);
    return buf;
}

inline std::string format_date(HourStamp t)
{
    const CivilDate c = civil_date_of(t);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

namespace detail {

inline bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char ch = s[i];
        if (ch < '0' || ch > '9') return false;
        v = v * 10 + (ch - '0');
    }
    out = v;
    return true;
}

} // namespace detail

/**
 * Parses "YYYY-MM-DD" into a midnight HourStamp. Used for config values like
 * the first delivery day; data timestamps go through parse_timestamp.
 */
inline HourStamp parse_date(std::string_view s)
{
    int y = 0, mo = 0, d = 0;
    const bool ok = s.size() == 10 && detail::parse_fixed_int(s, 0, 4, y) && s[4] == '-'
                    && detail::parse_fixed_int(s, 5, 2, mo) && s[7] == '-'
                    && detail::parse_fixed_int(s, 8, 2, d);
    if (!ok || mo < 1 || mo > 12 || d < 1 || d > timeutil::days_in_month(y, mo))
        throw ParseError("bad date '" + std::string(s) + "', expected YYYY-MM-DD");
    return make_hour(y, mo, d);
}

/**
 * Parses an ISO-8601 timestamp into UTC hours.
 *
 * Accepted shapes: "YYYY-MM-DD HH:MM", "YYYY-MM-DDTHH:MM", optional ":SS",
 * optional trailing "Z" or "+HH:MM"/"-HH:MM". A zone suffix in the string wins;
 * otherwise fallback_offset_minutes (the CsvSpec zone) is applied. Minutes and
 * seconds must be zero: sub-hourly stamps are a cadence violation, not a parse
 * failure, so callers can report them as such.
 */
inline HourStamp parse_timestamp(std::string_view s, int fallback_offset_minutes = 0)
{
    auto fail = [&] { throw ParseError("bad timestamp '" + std::string(s) + "'"); };

    int y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
    if (!(s.size() >= 16 && detail::parse_fixed_int(s, 0, 4, y) && s[4] == '-'
          && detail::parse_fixed_int(s, 5, 2, mo) && s[7] == '-'
          && detail::parse_fixed_int(s, 8, 2, d) && (s[10] == ' ' || s[10] == 'T')
          && detail::parse_fixed_int(s, 11, 2, hh) && s[13] == ':'
          && detail::parse_fixed_int(s, 14, 2, mi)))
        fail();

    std::size_t pos = 16;
    if (pos < s.size() && s[pos] == ':') {
        if (!detail::parse_fixed_int(s, pos + 1, 2, ss)) fail();
        pos += 3;
    }

    int offset_minutes = fallback_offset_minutes;
    if (pos < s.size()) {
        const char sign = s[pos];
        if (sign == 'Z' && pos + 1 == s.size()) {
            offset_minutes = 0;
        } else if ((sign == '+' || sign == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
            int oh = 0, om = 0;
            if (!detail::parse_fixed_int(s, pos + 1, 2, oh)
                || !detail::parse_fixed_int(s, pos + 4, 2, om))
                fail();
            offset_minutes = (oh * 60 + om) * (sign == '+' ? 1 : -1);
        } else {
            fail();
        }
    }

    if (mo < 1 || mo > 12 || d < 1 || d > timeutil::days_in_month(y, mo) || hh > 23 || mi > 59
        || ss > 59)
        fail();
    if (mi != 0 || ss != 0)
        throw CadenceError("timestamp '" + std::string(s) + "' is not on the hourly grid");
    if (offset_minutes % 60 != 0)
        throw CadenceError("zone offset of '" + std::string(s)
                           + "' is not a whole number of hours");

    HourStamp local = make_hour(y, mo, d, hh);
    return local - offset_minutes / 60;
}

} // namespace ptx
