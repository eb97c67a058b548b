#include "aivd/time.hpp"

#include <array>
#include <chrono>
#include <cstdio>

#include "aivd/error.hpp"

namespace aivd {

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> d{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && leap(y)) return 29;
    return d[m - 1];
}

// Days since 1970-01-01 for a valid date. Howard Hinnant's civil algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool all_digits(const std::string& s, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

}  // namespace

bool Date::valid() const {
    return year >= 1 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !all_digits(text, 0, 4) || !all_digits(text, 5, 7) || !all_digits(text, 8, 10))
        fail("BAD_DATE", "date must be ISO-8601 YYYY-MM-DD: '" + text + "'");
    Date d{std::stoi(text.substr(0, 4)), std::stoi(text.substr(5, 2)),
           std::stoi(text.substr(8, 2))};
    if (!d.valid()) fail("BAD_DATE", "not a valid calendar date: '" + text + "'");
    return d;
}

std::string Timestamp::to_string() const {
    std::int64_t z = unix_seconds;
    std::int64_t days = z / 86400;
    std::int64_t rem = z % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

Timestamp Timestamp::parse(const std::string& text) {
    if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
        text[19] != 'Z' || !all_digits(text, 11, 13) || !all_digits(text, 14, 16) ||
        !all_digits(text, 17, 19))
        fail("BAD_TIMESTAMP", "timestamp must be YYYY-MM-DDTHH:MM:SSZ: '" + text + "'");
    Date d = Date::parse(text.substr(0, 10));
    int hh = std::stoi(text.substr(11, 2));
    int mm = std::stoi(text.substr(14, 2));
    int ss = std::stoi(text.substr(17, 2));
    if (hh > 23 || mm > 59 || ss > 60)
        fail("BAD_TIMESTAMP", "time of day out of range: '" + text + "'");
    return Timestamp{days_from_civil(d.year, d.month, d.day) * 86400 + hh * 3600 + mm * 60 + ss};
}

Timestamp Timestamp::now() {
    using namespace std::chrono;
    return Timestamp{duration_cast<seconds>(system_clock::now().time_since_epoch()).count()};
}

Date Timestamp::date_utc() const {
    std::int64_t days = unix_seconds / 86400;
    if (unix_seconds % 86400 < 0) days -= 1;
    Date d;
    civil_from_days(days, d.year, d.month, d.day);
    return d;
}

}  // namespace aivd
