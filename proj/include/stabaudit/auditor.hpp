#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabaudit/corrections.hpp"
#include "stabaudit/run_table.hpp"
#include "stabaudit/stats.hpp"

namespace stabaudit {

/// Psychometric accept/reject levels for rank-order reliability plus the
/// nominal significance level for locational tests.
struct StabilityThresholds {
  double bare_minimum = 0.90;
  double desirable = 0.95;
  double nominal_alpha = 0.05;
};

/// Throws AuditError(BadConfig) unless 0 < bare_minimum <= desirable <= 1 and
/// 0 < nominal_alpha < 1.
void validate_thresholds(const StabilityThresholds& thresholds);

enum class RankOrderClass { MeetsDesirable, MeetsMinimum, Unstable, Undefined };

const char* rank_order_class_name(RankOrderClass cls);

/// Pure classification of a correlation against the thresholds; Undefined
/// when the correlation itself is undefined.
RankOrderClass classify_rank_order(const TestResult& correlation,
                                   const StabilityThresholds& thresholds);

struct RankOrderCell {
  std::string trait;
  TestResult correlation;
  RankOrderClass cls = RankOrderClass::Undefined;
};

/// Spearman per trait over control vs treatment columns. Needs >= 3 pairs
/// (TooFewPairs otherwise).
std::vector<RankOrderCell> audit_rank_order(const PairedAuditSet& set,
                                            const StabilityThresholds& thresholds);

struct LocationalCell {
  std::string facet;
  std::string trait;
  TestResult test;        // Wilcoxon signed-rank on treatment - control
  bool no_change = false; // all paired differences were zero
  double control_median = 0.0;
  double treatment_median = 0.0;
};

struct LocationalAudit {
  std::vector<LocationalCell> cells;         // facet-major, trait order
  std::vector<std::size_t> family;           // indices of cells with a p-value
  std::optional<CorrectionResult> bonferroni;
  std::optional<CorrectionResult> benjamini_hochberg;
};

/// Wilcoxon per (facet, trait), with both corrections applied over the family
/// of tests that produced a p-value. Cells whose differences are all zero are
/// recorded as "no locational change" and stay out of the family.
LocationalAudit audit_locational(const std::vector<PairedAuditSet>& sets,
                                 const StabilityThresholds& thresholds);

struct TotalVariation {
  std::vector<double> per_subject;  // normalized L1, aligned with set.pairs
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

/// Per-subject L1 distance between control and treatment vectors divided by
/// the schema's normalization constant; values lie in [0, 1].
TotalVariation total_variation(const PairedAuditSet& set);

struct SubgroupSpec {
  std::string attribute;
  std::size_t min_group_size = 10;
};

/// One cell of the verdict grid.
struct TraitVerdict {
  std::string facet;
  std::string trait;
  std::string subgroup;  // "overall" or "attribute=label"
  std::size_t n = 0;
  TestResult correlation;
  RankOrderClass rank_order_class = RankOrderClass::Undefined;
  TestResult locational;
  bool locational_no_change = false;
  bool significant_bonferroni = false;
  bool significant_bh = false;
  double control_median = 0.0;
  double treatment_median = 0.0;
  double tv_median = 0.0;
  double tv_mean = 0.0;
  double tv_max = 0.0;
};

constexpr const char* kOverallSubgroup = "overall";

/// Partitions the paired set by one demographic attribute; subjects without
/// the attribute fall into no group. Throws UnknownAttribute when no paired
/// subject carries it.
std::map<std::string, PairedAuditSet> partition_by_attribute(const PairedAuditSet& set,
                                                             const std::string& attribute);

/// Group size gate: at least min_group_size pairs, and never fewer than the
/// 3 pairs a rank correlation needs.
bool subgroup_meets_minimum(const SubgroupSpec& spec, std::size_t group_size);

/// Splits the pairs by one demographic attribute and audits each group that
/// meets min_group_size; smaller groups are skipped with a warning, never
/// silently. Significance flags are left unset: the per-attribute correction
/// family spans all facets, so the orchestrator fills them in.
/// Throws UnknownAttribute when no paired subject carries the attribute.
std::vector<TraitVerdict> subgroup_breakdown(const PairedAuditSet& set, const SubgroupSpec& spec,
                                             const StabilityThresholds& thresholds,
                                             std::vector<std::string>& warnings);

struct DistributionSummary {
  std::string trait;
  std::size_t n = 0;
  double median = 0.0;
  std::optional<double> skewness;  // adjusted Fisher-Pearson; empty if degenerate
  std::vector<std::pair<double, double>> gaps;
};

/// Per-trait median, sample skewness, and maximal empty intervals of width
/// >= gap_fraction * trait range strictly inside the observed support.
/// Needs >= 5 entries.
std::vector<DistributionSummary> distribution_summary(const RunTable& run,
                                                      double gap_fraction = 0.10);

struct RunDiagnostics {
  std::string run_id;
  std::vector<DistributionSummary> traits;
};

/// One correction family and its two corrected decision sets. family_label is
/// "overall" or "subgroup:<attribute>".
struct CorrectionLedger {
  std::string family_label;
  std::vector<std::string> members;  // "facet:trait:subgroup" in family order
  CorrectionResult bonferroni;
  CorrectionResult benjamini_hochberg;
};

struct AuditReport {
  std::string system_name;
  StabilityThresholds thresholds;
  std::vector<std::string> facets;
  std::vector<std::string> traits;  // schema order
  std::vector<TraitVerdict> verdicts;
  std::vector<CorrectionLedger> corrections;
  std::vector<RunDiagnostics> diagnostics;
  std::map<std::string, TotalVariation> facet_total_variation;
  std::map<std::string, std::map<std::string, TotalVariation>> subgroup_total_variation;
  std::vector<std::string> warnings;
};

/// Validates and orders the assembled report: at least one facet, exactly one
/// overall verdict per (facet, trait), and an overall correction family whose
/// size equals the number of overall locational tests actually performed
/// (InconsistentFamily otherwise). Verdicts are sorted by (facet order, trait
/// order, subgroup) so serialization is stable.
AuditReport compile_report(AuditReport draft);

struct AuditInputs {
  std::string system_name;
  StabilityThresholds thresholds;
  double gap_fraction = 0.10;
  std::vector<SubgroupSpec> subgroups;
  std::vector<PairedAuditSet> sets;               // one per facet, audit order
  std::vector<const RunTable*> diagnostic_runs;   // runs to summarize
};

/// Full audit: rank-order, locational (with corrections), total variation,
/// subgroup breakdowns, and distribution diagnostics, compiled into a report.
AuditReport run_audit_suite(const AuditInputs& inputs);

}  // namespace stabaudit
