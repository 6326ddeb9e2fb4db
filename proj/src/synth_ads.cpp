#include "stabaudit/synth_ads.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stabaudit/errors.hpp"

namespace stabaudit {

namespace {

// splitmix64 finalizer; the one fixed hash underneath every deterministic
// draw so outputs do not depend on platform library internals.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_str(const std::string& s) {
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

double unit_from(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
}

double next_unit(std::uint64_t& state) { return unit_from(mix64(state++)); }

double next_gaussian(std::uint64_t& state) {
  // Box-Muller; one value per pair of uniforms is plenty here
  const double u1 = std::max(next_unit(state), 1e-300);
  const double u2 = next_unit(state);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Sign in {-1, +1} derived from a hash.
double hash_sign(std::uint64_t h) { return unit_from(h) < 0.5 ? -1.0 : 1.0; }

// Exact-slack projection back onto the simplex after perturbation: clamp into
// trait ranges, then spread the sum deficit/excess proportionally to the
// remaining slack.
void project_to_simplex(const ScoreSchema& schema, std::vector<double>& v) {
  const double target = *schema.simplex_sum();
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::clamp(v[i], schema.traits()[i].min, schema.traits()[i].max);
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum > target) {
    double slack = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) slack += v[i] - schema.traits()[i].min;
    if (slack <= 0.0) return;
    const double factor = (sum - target) / slack;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= (v[i] - schema.traits()[i].min) * factor;
  } else if (sum < target) {
    double slack = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) slack += schema.traits()[i].max - v[i];
    if (slack <= 0.0) return;
    const double factor = (target - sum) / slack;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += (schema.traits()[i].max - v[i]) * factor;
  }
}

std::vector<std::string> document_tags(const SyntheticDocument& doc) {
  std::vector<std::string> tags{"format:" + doc.format_tag, "source:" + doc.source_tag};
  if (doc.embedded_link) tags.push_back("url_embedding");
  return tags;
}

}  // namespace

const LinkageTable::Entry* LinkageTable::find(const std::string& contact_key) const {
  const auto it = entries_.find(contact_key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool LinkageTable::freeze(const std::string& contact_key, ScoreVector vector,
                          std::string linked_source) {
  return entries_.emplace(contact_key, Entry{std::move(vector), std::move(linked_source)}).second;
}

SyntheticAds::SyntheticAds(AdsBehaviorConfig config)
    : config_(std::move(config)), jitter_state_(combine(config_.base_seed, hash_str("jitter"))) {
  if (!(config_.jitter_sd >= 0.0) || !std::isfinite(config_.jitter_sd))
    throw AuditError(Errc::BadConfig, "jitter_sd must be finite and nonnegative");
  if (!(config_.drift_per_day >= 0.0) || !std::isfinite(config_.drift_per_day))
    throw AuditError(Errc::BadConfig, "drift_per_day must be finite and nonnegative");
  if (!(config_.cluster_snap_radius >= 0.0) || !std::isfinite(config_.cluster_snap_radius))
    throw AuditError(Errc::BadConfig, "cluster_snap_radius must be finite and nonnegative");
  for (const auto& [tag, magnitude] : config_.facet_sensitivity)
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude))
      throw AuditError(Errc::BadConfig, "facet sensitivity for '" + tag + "' must be nonnegative");
  if (!config_.cluster_centers.empty()) {
    if (config_.cluster_centers.size() != config_.schema.trait_count())
      throw AuditError(Errc::BadConfig, "cluster_centers must list one entry per trait");
    if (config_.cluster_snap_radius <= 0.0)
      throw AuditError(Errc::BadConfig, "cluster snapping needs a positive radius");
    for (std::size_t t = 0; t < config_.cluster_centers.size(); ++t)
      for (double center : config_.cluster_centers[t])
        if (center < config_.schema.traits()[t].min || center > config_.schema.traits()[t].max)
          throw AuditError(Errc::BadConfig, "cluster center outside trait range");
  }
}

ScoreVector SyntheticAds::score(const SyntheticDocument& doc, Timestamp now) {
  const auto& schema = config_.schema;

  if (config_.linkage_enabled && doc.contact_key) {
    if (const auto* frozen = linkage_.find(*doc.contact_key)) return frozen->vector;
  }

  const std::size_t k = schema.trait_count();
  std::vector<double> values(k);
  const std::uint64_t doc_key =
      combine(config_.base_seed, static_cast<std::uint64_t>(doc.content_seed));

  // base vector from the content hash
  if (schema.simplex_sum()) {
    double total = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
      const double u = unit_from(combine(doc_key, t + 1));
      values[t] = -std::log(1.0 - u);
      total += values[t];
    }
    for (double& v : values) v = v / total * *schema.simplex_sum();
  } else {
    for (std::size_t t = 0; t < k; ++t) {
      const auto& spec = schema.traits()[t];
      values[t] = spec.min + unit_from(combine(doc_key, t + 1)) * (spec.max - spec.min);
    }
  }

  // facet displacement
  const std::uint64_t subject_key = combine(config_.base_seed, hash_str(doc.subject_id));
  for (const auto& tag : document_tags(doc)) {
    const auto found = config_.facet_sensitivity.find(tag);
    if (found == config_.facet_sensitivity.end() || found->second == 0.0) continue;
    const std::uint64_t tag_key = combine(subject_key, hash_str(tag));
    for (std::size_t t = 0; t < k; ++t)
      values[t] += found->second * hash_sign(combine(tag_key, t + 1));
  }

  // scoring-time drift: one direction per trait, magnitude grows with the
  // scoring clock, identical for every subject
  if (config_.drift_per_day > 0.0) {
    const std::uint64_t drift_key = combine(config_.base_seed, hash_str("drift"));
    const double days = static_cast<double>(now - config_.drift_reference) / kSecondsPerDay;
    for (std::size_t t = 0; t < k; ++t)
      values[t] += config_.drift_per_day * days * hash_sign(combine(drift_key, t + 1));
  }

  // per-call noise
  if (!config_.deterministic && config_.jitter_sd > 0.0)
    for (double& v : values) v += config_.jitter_sd * next_gaussian(jitter_state_);

  // snap toward the nearest cluster center
  if (!config_.cluster_centers.empty()) {
    for (std::size_t t = 0; t < k; ++t) {
      const auto& centers = config_.cluster_centers[t];
      if (centers.empty()) continue;
      double nearest = centers.front();
      for (double c : centers)
        if (std::fabs(values[t] - c) < std::fabs(values[t] - nearest)) nearest = c;
      values[t] = nearest + std::clamp(values[t] - nearest, -config_.cluster_snap_radius,
                                       config_.cluster_snap_radius);
    }
  }

  if (schema.simplex_sum()) {
    project_to_simplex(schema, values);
  } else {
    for (std::size_t t = 0; t < k; ++t)
      values[t] = std::clamp(values[t], schema.traits()[t].min, schema.traits()[t].max);
  }

  ScoreVector result = validate_score_vector(schema, values);

  if (config_.linkage_enabled && doc.embedded_link && doc.contact_key)
    linkage_.freeze(*doc.contact_key, result, *doc.embedded_link);

  return result;
}

ScoreVector random_guesser(const ScoreSchema& schema, std::uint64_t seed) {
  std::uint64_t state = combine(seed, hash_str("random_guesser"));
  std::vector<double> values(schema.trait_count());
  if (schema.simplex_sum()) {
    double total = 0.0;
    for (double& v : values) {
      const double u = std::max(next_unit(state), 1e-300);
      v = -std::log(u);
      total += v;
    }
    for (double& v : values) v = v / total * *schema.simplex_sum();
  } else {
    for (std::size_t t = 0; t < values.size(); ++t) {
      const auto& spec = schema.traits()[t];
      values[t] = spec.min + next_unit(state) * (spec.max - spec.min);
    }
  }
  return validate_score_vector(schema, values);
}

Cohort generate_cohort(std::size_t n, std::uint64_t seed, const DemographicSpec& demographics,
                       Timestamp authored_at) {
  if (n == 0) throw AuditError(Errc::BadConfig, "cohort size must be at least 1");
  for (const auto& [attribute, labels] : demographics) {
    double total = 0.0;
    for (const auto& [label, weight] : labels) {
      if (weight < 0.0 || !std::isfinite(weight))
        throw AuditError(Errc::EmptyDistribution,
                         "negative weight for '" + attribute + "=" + label + "'");
      total += weight;
    }
    if (labels.empty() || total <= 0.0)
      throw AuditError(Errc::EmptyDistribution,
                       "attribute '" + attribute + "' has no positive-weight label");
  }

  Cohort cohort;
  cohort.subjects.reserve(n);
  cohort.documents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "subj-%04zu", i + 1);
    SubjectRecord subject;
    subject.subject_id = buf;
    for (const auto& [attribute, labels] : demographics) {
      double total = 0.0;
      for (const auto& [label, weight] : labels) total += weight;
      const double u =
          unit_from(combine(combine(seed, hash_str(attribute)), i + 1)) * total;
      double cumulative = 0.0;
      for (const auto& [label, weight] : labels) {
        cumulative += weight;
        if (u < cumulative) {
          subject.demographics.attributes[attribute] = label;
          break;
        }
      }
      // rounding can leave u == total; the last label takes it
      if (!subject.demographics.attributes.count(attribute))
        subject.demographics.attributes[attribute] = labels.back().first;
    }

    SyntheticDocument doc;
    doc.subject_id = subject.subject_id;
    doc.content_seed =
        static_cast<std::int64_t>(combine(combine(seed, hash_str("content")), i + 1));
    doc.contact_key = subject.subject_id + "@example.test";
    doc.authored_at = authored_at;
    cohort.documents.push_back(std::move(doc));
    cohort.subjects.push_back(std::move(subject));
  }
  return cohort;
}

const char* facet_name(Facet facet) {
  switch (facet) {
    case Facet::FileFormat: return "file_format";
    case Facet::SourceContext: return "source_context";
    case Facet::UrlEmbedding: return "url_embedding";
    case Facet::AlgorithmTime: return "algorithm_time";
    case Facet::ParticipantTime: return "participant_time";
  }
  return "unknown";
}

Facet facet_from_string(const std::string& name) {
  for (Facet f : {Facet::FileFormat, Facet::SourceContext, Facet::UrlEmbedding,
                  Facet::AlgorithmTime, Facet::ParticipantTime})
    if (name == facet_name(f)) return f;
  throw AuditError(Errc::UnknownFacet, "unknown facet '" + name + "'");
}

SyntheticDocument apply_treatment(const SyntheticDocument& doc, Facet facet,
                                  const TreatmentParams& params) {
  SyntheticDocument treated = doc;
  switch (facet) {
    case Facet::FileFormat:
      treated.format_tag = params.format_tag;
      break;
    case Facet::SourceContext:
      treated.source_tag = params.source_tag;
      break;
    case Facet::UrlEmbedding:
      if (params.link_base.empty())
        treated.embedded_link.reset();
      else
        treated.embedded_link = params.link_base + doc.subject_id;
      break;
    case Facet::AlgorithmTime:
      break;  // the shift applies to the scoring clock, not the document
    case Facet::ParticipantTime: {
      const auto shift = static_cast<Timestamp>(params.participant_days * kSecondsPerDay);
      if (shift == 0) break;  // zero elapsed time: the materials did not change
      treated.authored_at = doc.authored_at + shift;
      // the subject's materials changed with them
      treated.content_seed = static_cast<std::int64_t>(
          combine(static_cast<std::uint64_t>(doc.content_seed),
                  static_cast<std::uint64_t>(shift)));
      break;
    }
  }
  return treated;
}

RunTable score_run(SyntheticAds& ads, const std::vector<SyntheticDocument>& documents,
                   const std::string& run_id, const std::string& facet_label,
                   const std::string& treatment_label, Timestamp now) {
  RunTable run(run_id, ads.config().schema, facet_label, treatment_label, now);
  for (const auto& doc : documents) run.add_entry(doc.subject_id, ads.score(doc, now));
  return run;
}

}  // namespace stabaudit
