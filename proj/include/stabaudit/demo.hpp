#pragma once

#include <cstdint>
#include <string>

#include "stabaudit/report_io.hpp"

namespace stabaudit {

/// Built-in synthetic audits with known ground truth. Each one generates a
/// cohort and score runs under <out_dir>/data, writes <out_dir>/config.json,
/// runs the full audit over those files, and embeds the generator parameters
/// in the report for verification.
enum class Scenario {
  Stable,             // all knobs off: r = 1.0, zero total variation
  FileFormatUnstable, // cluster snapping + format sensitivity: rank instability and a gap
  Discontinuous,      // cluster snapping only: stable ranks, gappy distributions
  Linked,             // persistent contact-key linkage freezes evolved content
  Drifting,           // scoring-time drift: pure locational instability, family of 20
  Baseline,           // two independent random-guesser runs: the null reference
};

const char* scenario_name(Scenario scenario);
Scenario scenario_from_string(const std::string& name);  // throws UnknownScenario

constexpr std::size_t kDemoCohortSize = 200;

/// Generates the scenario inputs and runs the audit. The returned bundle is
/// not yet written; pass it to write_bundle(bundle, out_dir).
ReportBundle run_demo(Scenario scenario, std::uint64_t seed, const std::string& out_dir);

}  // namespace stabaudit
