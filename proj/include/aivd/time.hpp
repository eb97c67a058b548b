#pragma once

#include <cstdint>
#include <string>

namespace aivd {

// Calendar date, validated Gregorian. Parsed from and rendered to
// ISO-8601 "YYYY-MM-DD" only.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const;
    std::string to_string() const;
    static Date parse(const std::string& text);  // throws BAD_DATE
};

// UTC instant with second resolution, rendered "YYYY-MM-DDTHH:MM:SSZ".
struct Timestamp {
    std::int64_t unix_seconds = 0;

    auto operator<=>(const Timestamp&) const = default;

    std::string to_string() const;
    static Timestamp parse(const std::string& text);  // throws BAD_TIMESTAMP
    static Timestamp now();

    Date date_utc() const;
};

}  // namespace aivd
