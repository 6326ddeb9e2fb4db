#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stabaudit/run_table.hpp"
#include "stabaudit/score_schema.hpp"
#include "stabaudit/timeutil.hpp"

namespace stabaudit {

/// An input to the synthetic scorer: not text, just the attribute bundle the
/// instability mechanisms react to.
struct SyntheticDocument {
  std::string subject_id;
  std::string format_tag = "pdf";     // e.g. "pdf", "txt", "docx"
  std::string source_tag = "resume";  // e.g. "resume", "profile", "micropost"
  std::optional<std::string> embedded_link;
  std::optional<std::string> contact_key;  // email-like identifier
  std::int64_t content_seed = 0;
  Timestamp authored_at = 0;
};

/// Knobs of the synthetic scorer. Every instability the auditor should be
/// able to detect is injected explicitly here, so audits of this ADS have
/// ground truth.
struct AdsBehaviorConfig {
  explicit AdsBehaviorConfig(ScoreSchema s) : schema(std::move(s)) {}

  ScoreSchema schema;
  std::uint64_t base_seed = 0;
  bool deterministic = true;
  double jitter_sd = 0.0;       // per-call noise when nondeterministic
  double drift_per_day = 0.0;   // scoring-time drift magnitude
  Timestamp drift_reference = 0;  // drift is proportional to days since this instant
  /// Displacement magnitude per document tag ("format:txt", "source:profile",
  /// "url_embedding"); direction is a per-(subject, tag, trait) hash sign.
  std::map<std::string, double> facet_sensitivity;
  /// Per-trait cluster centers; a nonempty list snaps that trait's output to
  /// within cluster_snap_radius of the nearest center, producing detectable
  /// distribution gaps.
  std::vector<std::vector<double>> cluster_centers;
  double cluster_snap_radius = 0.0;
  bool linkage_enabled = false;
};

/// Persistent contact-key bindings. Once a key is frozen its vector never
/// changes.
class LinkageTable {
 public:
  struct Entry {
    ScoreVector vector;
    std::string linked_source;
  };

  const Entry* find(const std::string& contact_key) const;
  /// First insertion wins; returns false when the key was already frozen.
  bool freeze(const std::string& contact_key, ScoreVector vector, std::string linked_source);
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

/// The synthetic ADS. Owns the linkage state and the jitter stream, so one
/// instance models one vendor account over time. score() mutates internal
/// state (linkage, jitter RNG) and must not be called concurrently.
class SyntheticAds {
 public:
  explicit SyntheticAds(AdsBehaviorConfig config);  // validates the knobs

  /// Scores one document at scoring time `now`. With linkage enabled, a
  /// document whose contact_key is already frozen returns the frozen vector
  /// verbatim, ignoring everything else about the document; a document
  /// carrying both an embedded link and a contact key freezes its result.
  ScoreVector score(const SyntheticDocument& doc, Timestamp now);

  const AdsBehaviorConfig& config() const { return config_; }
  const LinkageTable& linkage() const { return linkage_; }

 private:
  AdsBehaviorConfig config_;
  LinkageTable linkage_;
  std::uint64_t jitter_state_;
};

/// Uniform draw from the schema's valid output space: independent per-trait
/// uniforms, or the uniform distribution on the scaled simplex (normalized
/// exponential draws) when a simplex constraint is present. Deterministic
/// given the seed.
ScoreVector random_guesser(const ScoreSchema& schema, std::uint64_t seed);

/// (attribute, weighted labels) pairs drive cohort demographics sampling.
using DemographicSpec =
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, double>>>>;

struct Cohort {
  std::vector<SubjectRecord> subjects;
  std::vector<SyntheticDocument> documents;  // one base document per subject
};

/// n subjects with sampled demographics and one base document each.
/// Deterministic given the seed. Throws EmptyDistribution for an attribute
/// with no positive-weight label.
Cohort generate_cohort(std::size_t n, std::uint64_t seed, const DemographicSpec& demographics,
                       Timestamp authored_at = 0);

enum class Facet { FileFormat, SourceContext, UrlEmbedding, AlgorithmTime, ParticipantTime };

/// Facet names as used in configs and reports: file_format, source_context,
/// url_embedding, algorithm_time, participant_time.
const char* facet_name(Facet facet);
Facet facet_from_string(const std::string& name);  // throws UnknownFacet

struct TreatmentParams {
  std::string format_tag = "txt";
  std::string source_tag = "profile";
  /// Base URL for url_embedding; the subject id is appended. Empty clears the
  /// link instead.
  std::string link_base = "https://profiles.example.test/";
  double participant_days = 240.0;
};

/// Returns a copy of the document differing only in the facet-relevant
/// attributes. algorithm_time leaves the document untouched: the shift
/// applies to the `now` passed to score. participant_time re-derives the
/// content seed: the subject's materials changed.
SyntheticDocument apply_treatment(const SyntheticDocument& doc, Facet facet,
                                  const TreatmentParams& params = {});

/// Scores every document into a validated RunTable.
RunTable score_run(SyntheticAds& ads, const std::vector<SyntheticDocument>& documents,
                   const std::string& run_id, const std::string& facet_label,
                   const std::string& treatment_label, Timestamp now);

}  // namespace stabaudit
