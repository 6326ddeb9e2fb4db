#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stabaudit/auditor.hpp"
#include "stabaudit/run_table.hpp"

namespace stabaudit {

struct FacetFiles {
  std::string name;
  std::string control_path;
  std::string treatment_path;
};

/// Declarative audit description, loaded from a JSON config file. Relative
/// paths are resolved against the config file's directory.
struct AuditConfig {
  explicit AuditConfig(ScoreSchema s) : schema(std::move(s)) {}

  std::string system_name;
  ScoreSchema schema;
  std::vector<FacetFiles> facets;
  std::optional<std::string> demographics_path;
  std::vector<SubgroupSpec> subgroups;
  StabilityThresholds thresholds;
  std::vector<CorrectionMethod> correction_methods{CorrectionMethod::Bonferroni,
                                                   CorrectionMethod::BenjaminiHochberg};
  double gap_fraction = 0.10;
  std::string output_dir = "out";
};

AuditConfig parse_audit_config(const std::string& json_text, const std::string& base_dir);
AuditConfig load_audit_config(const std::string& path);

/// A fully computed audit: the report plus every output file's bytes, ready
/// to be written in one pass.
struct ReportBundle {
  AuditReport report;
  nlohmann::json ground_truth;                // null unless produced by a demo
  std::map<std::string, std::string> files;   // relative path -> content
};

constexpr int kReportSchemaVersion = 1;

/// Ingests the configured files and runs the full audit; returns the bundle
/// without touching the output directory.
ReportBundle run_audit(const AuditConfig& config);

std::string report_to_json(const AuditReport& report, const nlohmann::json& ground_truth);
AuditReport report_from_json(const std::string& json_text);

/// One row per verdict; row count always equals the verdict count.
std::string report_to_csv(const AuditReport& report);
std::string report_to_text(const AuditReport& report);

/// Writes every file of the bundle under out_dir. All content is in memory
/// before the first write; if any write fails, already-written bundle files
/// are removed and an error manifest is left instead.
void write_bundle(const ReportBundle& bundle, const std::string& out_dir);

/// Writes out_dir/error.json describing a failed run.
void write_error_manifest(const std::string& out_dir, const std::string& error_name,
                          int exit_class, const std::string& message);

}  // namespace stabaudit
