#pragma once

#include <cstdint>
#include <string>

namespace stabaudit {

/// Seconds since the Unix epoch, UTC. All timestamps in the toolkit use this.
using Timestamp = std::int64_t;

constexpr double kSecondsPerDay = 86400.0;

/// Parses an RFC 3339 timestamp ("2021-04-01T12:30:00Z" or with a numeric
/// offset). Fractional seconds are accepted and truncated.
/// Throws AuditError(BadTimestamp) on malformed input.
Timestamp parse_rfc3339(const std::string& text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ" (UTC).
std::string format_rfc3339(Timestamp t);

}  // namespace stabaudit
