#include "provcurate/provenance/timestamp.hpp"

#include "provcurate/error.hpp"

#include <cstdio>

namespace provcurate::provenance {

using namespace std::chrono;

TimePoint system_now()
{
    return floor<milliseconds>(system_clock::now());
}

std::string format_timestamp(TimePoint t)
{
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()), static_cast<int>(hms.subseconds().count()));
    return buf;
}

namespace {

[[noreturn]] void bad(std::string_view text)
{
    throw ContractViolation("invalid timestamp: " + std::string(text));
}

int digits(std::string_view s, std::size_t pos, std::size_t n, std::string_view text)
{
    if (pos + n > s.size()) bad(text);
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') bad(text);
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

} // namespace

TimePoint parse_timestamp(std::string_view text)
{
    const std::string_view s = text;
    const int y = digits(s, 0, 4, text);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') bad(text);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(digits(s, 5, 2, text))},
                             day{static_cast<unsigned>(digits(s, 8, 2, text))}};
    if (!ymd.ok()) bad(text);
    TimePoint t{sys_days{ymd}};
    std::size_t pos = 10;
    if (pos < s.size() && s[pos] == 'T') {
        if (s.size() < 19 || s[13] != ':' || s[16] != ':') bad(text);
        const int hh = digits(s, 11, 2, text), mm = digits(s, 14, 2, text), ss = digits(s, 17, 2, text);
        if (hh > 24 || mm > 59 || ss > 60) bad(text);
        t += hours{hh} + minutes{mm} + seconds{ss};
        pos = 19;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            int ms = 0, scale = 100;
            const std::size_t start = pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                ms += (s[pos] - '0') * scale;
                scale /= 10;
                ++pos;
            }
            if (pos == start) bad(text);
            t += milliseconds{ms};
        }
    }
    if (pos == s.size()) return t;
    if (s[pos] == 'Z' && pos + 1 == s.size()) return t;
    if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
        const auto offset = hours{digits(s, pos + 1, 2, text)} + minutes{digits(s, pos + 4, 2, text)};
        return s[pos] == '+' ? t - offset : t + offset;
    }
    bad(text);
}

} // namespace provcurate::provenance
