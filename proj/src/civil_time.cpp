#include "memnet/civil_time.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace memnet::civil {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace

date_time from_epoch(std::int64_t secs) {
    const std::int64_t days = floor_div(secs, 86400);
    std::int64_t rem = secs - days * 86400; // [0, 86400)
    const ymd d = civil_from_days(days);
    date_time out;
    out.year = d.year;
    out.month = d.month;
    out.day = d.day;
    out.hour = static_cast<unsigned>(rem / 3600);
    rem %= 3600;
    out.minute = static_cast<unsigned>(rem / 60);
    out.second = static_cast<unsigned>(rem % 60);
    return out;
}

std::int64_t month_key(std::int64_t secs) {
    const ymd d = civil_from_days(floor_div(secs, 86400));
    return static_cast<std::int64_t>(d.year) * 12 + static_cast<std::int64_t>(d.month) - 1;
}

std::int64_t floor_day(std::int64_t secs) { return floor_div(secs, 86400) * 86400; }

bool parse_instant(const std::string& text, std::int64_t& epoch_out) {
    if (text.empty()) return false;

    bool digits_only = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (i == 0 && (c == '-' || c == '+')) continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            digits_only = false;
            break;
        }
    }
    if (digits_only) {
        epoch_out = std::strtoll(text.c_str(), nullptr, 10);
        return true;
    }

    int year = 0;
    unsigned month = 0, day = 0, hour = 0, minute = 0, second = 0;
    char sep = '\0';
    int n = std::sscanf(text.c_str(), "%d-%u-%u%c%u:%u:%u", &year, &month, &day, &sep, &hour,
                        &minute, &second);
    if (n == 3) {
        // date only
    } else if (n == 7 && (sep == ' ' || sep == 'T')) {
        if (hour > 23 || minute > 59 || second > 60) return false;
    } else {
        return false;
    }
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    epoch_out = days_from_civil(year, month, day) * 86400 +
                static_cast<std::int64_t>(hour) * 3600 + minute * 60 + second;
    return true;
}

} // namespace memnet::civil
