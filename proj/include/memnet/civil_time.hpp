#pragma once

#include <cstdint>
#include <string>

namespace memnet::civil {

struct date_time {
    int year = 1970;
    unsigned month = 1; // 1..12
    unsigned day = 1;   // 1..31
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
};

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's algorithm).
constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);                      // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;            // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;                     // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct ymd {
    int year;
    unsigned month;
    unsigned day;
};

constexpr ymd civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);                   // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;     // [0, 399]
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);                   // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                        // [0, 11]
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;                                // [1, 31]
    const unsigned m = mp + (mp < 10 ? 3 : -9);                                     // [1, 12]
    return {static_cast<int>(y + (m <= 2)), m, d};
}

constexpr std::int64_t to_epoch(const date_time& dt) {
    return days_from_civil(dt.year, dt.month, dt.day) * 86400 + dt.hour * 3600 +
           dt.minute * 60 + dt.second;
}

// UTC calendar fields of an epoch instant.
date_time from_epoch(std::int64_t secs);

// Months since year 0 for the UTC instant; equal keys mean same calendar month.
std::int64_t month_key(std::int64_t secs);

// Epoch seconds of the first instant of the UTC day containing `secs`.
std::int64_t floor_day(std::int64_t secs);

// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM:SS", "YYYY-MM-DDTHH:MM:SS", or a raw
// integer epoch. Returns false on anything else.
bool parse_instant(const std::string& text, std::int64_t& epoch_out);

} // namespace memnet::civil
