#pragma once

#include <map>
#include <string>
#include <vector>

#include "stabaudit/score_schema.hpp"
#include "stabaudit/timeutil.hpp"

namespace stabaudit {

/// Open-vocabulary demographic attributes (e.g. gender, primary_language).
/// Missing attributes are simply absent from the map.
struct DemographicProfile {
  std::map<std::string, std::string> attributes;

  bool operator==(const DemographicProfile&) const = default;
};

struct SubjectRecord {
  std::string subject_id;
  DemographicProfile demographics;

  bool operator==(const SubjectRecord&) const = default;
};

/// One scoring run: every subject's validated score vector under one schema,
/// labeled with the facet and treatment it belongs to.
class RunTable {
 public:
  RunTable(std::string run_id, ScoreSchema schema, std::string facet_label,
           std::string treatment_label, Timestamp scored_at);

  /// Throws AuditError(DuplicateSubject) on a repeated id; the vector is
  /// validated against the schema.
  void add_entry(const std::string& subject_id, const std::vector<double>& raw_values);
  void add_entry(const std::string& subject_id, ScoreVector vector);

  const std::string& run_id() const { return run_id_; }
  const ScoreSchema& schema() const { return schema_; }
  const std::string& facet_label() const { return facet_label_; }
  const std::string& treatment_label() const { return treatment_label_; }
  Timestamp scored_at() const { return scored_at_; }
  const std::map<std::string, ScoreVector>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const RunTable&) const = default;

 private:
  std::string run_id_;
  ScoreSchema schema_;
  std::string facet_label_;
  std::string treatment_label_;
  Timestamp scored_at_ = 0;
  std::map<std::string, ScoreVector> entries_;
};

struct ScorePair {
  std::string subject_id;
  ScoreVector control;
  ScoreVector treatment;

  bool operator==(const ScorePair&) const = default;
};

/// Subject-aligned control/treatment scores for one facet. Subjects present
/// in only one run are dropped and counted, never imputed.
struct PairedAuditSet {
  explicit PairedAuditSet(ScoreSchema s) : schema(std::move(s)) {}

  std::string facet;
  std::string control_run_id;
  std::string treatment_run_id;
  ScoreSchema schema;
  Timestamp control_scored_at = 0;
  Timestamp treatment_scored_at = 0;
  std::vector<ScorePair> pairs;  // sorted by subject_id
  std::size_t dropped_control_only = 0;
  std::size_t dropped_treatment_only = 0;
  std::map<std::string, DemographicProfile> demographics;  // for paired subjects
};

/// Intersects the two runs on subject id. Paired subjects found in the cohort
/// get their demographics attached; absent subjects get empty profiles.
/// Throws SchemaMismatch when the runs disagree on schema, EmptyIntersection
/// when no subject appears in both.
PairedAuditSet pair_runs(const RunTable& control, const RunTable& treatment,
                         const std::vector<SubjectRecord>& cohort);

}  // namespace stabaudit
