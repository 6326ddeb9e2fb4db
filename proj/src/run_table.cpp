#include "stabaudit/run_table.hpp"

#include "stabaudit/errors.hpp"

namespace stabaudit {

RunTable::RunTable(std::string run_id, ScoreSchema schema, std::string facet_label,
                   std::string treatment_label, Timestamp scored_at)
    : run_id_(std::move(run_id)),
      schema_(std::move(schema)),
      facet_label_(std::move(facet_label)),
      treatment_label_(std::move(treatment_label)),
      scored_at_(scored_at) {}

void RunTable::add_entry(const std::string& subject_id, const std::vector<double>& raw_values) {
  add_entry(subject_id, validate_score_vector(schema_, raw_values));
}

void RunTable::add_entry(const std::string& subject_id, ScoreVector vector) {
  if (subject_id.empty())
    throw AuditError(Errc::DuplicateSubject, "subject id must be nonempty");
  if (vector.values.size() != schema_.trait_count())
    throw AuditError(Errc::LengthMismatch, "vector length does not match schema");
  auto [it, inserted] = entries_.emplace(subject_id, std::move(vector));
  (void)it;
  if (!inserted)
    throw AuditError(Errc::DuplicateSubject, "duplicate subject id '" + subject_id + "'");
}

PairedAuditSet pair_runs(const RunTable& control, const RunTable& treatment,
                         const std::vector<SubjectRecord>& cohort) {
  if (!(control.schema() == treatment.schema()))
    throw AuditError(Errc::SchemaMismatch, "control and treatment runs use different schemas");

  PairedAuditSet set(control.schema());
  set.facet = control.facet_label();
  set.control_run_id = control.run_id();
  set.treatment_run_id = treatment.run_id();
  set.control_scored_at = control.scored_at();
  set.treatment_scored_at = treatment.scored_at();

  std::map<std::string, DemographicProfile> cohort_index;
  for (const auto& subject : cohort) cohort_index[subject.subject_id] = subject.demographics;

  // entries() is ordered, so a single merge pass gives sorted pairs and the
  // set-difference counts.
  auto c = control.entries().begin();
  auto t = treatment.entries().begin();
  while (c != control.entries().end() && t != treatment.entries().end()) {
    if (c->first < t->first) {
      ++set.dropped_control_only;
      ++c;
    } else if (t->first < c->first) {
      ++set.dropped_treatment_only;
      ++t;
    } else {
      set.pairs.push_back({c->first, c->second, t->second});
      auto found = cohort_index.find(c->first);
      set.demographics[c->first] =
          found != cohort_index.end() ? found->second : DemographicProfile{};
      ++c;
      ++t;
    }
  }
  set.dropped_control_only += std::distance(c, control.entries().end());
  set.dropped_treatment_only += std::distance(t, treatment.entries().end());

  if (set.pairs.empty())
    throw AuditError(Errc::EmptyIntersection, "runs '" + control.run_id() + "' and '" +
                                                  treatment.run_id() + "' share no subjects");
  return set;
}

}  // namespace stabaudit
