#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace provcurate::provenance {

using TimePoint = std::chrono::time_point<std::chrono::system_clock, std::chrono::milliseconds>;

/// Source of the current time; injectable for tests.
using Clock = std::function<TimePoint()>;

/// The system clock truncated to milliseconds.
TimePoint system_now();

/// "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string format_timestamp(TimePoint t);

/// Accepts xsd:dateTime with optional fraction and zone (UTC when absent)
/// and a bare xsd:date (midnight UTC). Throws ContractViolation otherwise.
TimePoint parse_timestamp(std::string_view text);

} // namespace provcurate::provenance
