#include "stabaudit/score_schema.hpp"

#include <cmath>
#include <set>

#include "stabaudit/errors.hpp"

namespace stabaudit {

ScoreSchema::ScoreSchema(std::string system_name, std::vector<TraitSpec> traits,
                         std::optional<double> simplex_sum)
    : system_name_(std::move(system_name)), traits_(std::move(traits)), simplex_sum_(simplex_sum) {
  if (traits_.empty()) throw AuditError(Errc::InvalidSchema, "schema needs at least one trait");
  std::set<std::string> seen;
  for (const auto& t : traits_) {
    if (t.name.empty()) throw AuditError(Errc::InvalidSchema, "trait name must be nonempty");
    if (!seen.insert(t.name).second)
      throw AuditError(Errc::InvalidSchema, "duplicate trait name '" + t.name + "'");
    if (!std::isfinite(t.min) || !std::isfinite(t.max) || !(t.min < t.max))
      throw AuditError(Errc::InvalidSchema, "trait '" + t.name + "' requires min < max");
  }
  if (simplex_sum_) {
    if (!std::isfinite(*simplex_sum_) || *simplex_sum_ <= 0.0)
      throw AuditError(Errc::InvalidSchema, "simplex_sum must be positive");
    for (const auto& t : traits_) {
      if (t.min < 0.0 || t.max > *simplex_sum_)
        throw AuditError(Errc::InvalidSchema,
                         "trait '" + t.name + "' range incompatible with simplex_sum");
    }
  }
}

std::optional<std::size_t> ScoreSchema::trait_index(const std::string& name) const {
  for (std::size_t i = 0; i < traits_.size(); ++i)
    if (traits_[i].name == name) return i;
  return std::nullopt;
}

ScoreVector validate_score_vector(const ScoreSchema& schema, const std::vector<double>& raw) {
  if (raw.size() != schema.trait_count())
    throw AuditError(Errc::LengthMismatch,
                     "expected " + std::to_string(schema.trait_count()) + " values, got " +
                         std::to_string(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& t = schema.traits()[i];
    if (!std::isfinite(raw[i]))
      throw AuditError(Errc::OutOfRange, "trait '" + t.name + "': value is not finite");
    if (raw[i] < t.min || raw[i] > t.max)
      throw AuditError(Errc::OutOfRange, "trait '" + t.name + "': " + std::to_string(raw[i]) +
                                             " outside [" + std::to_string(t.min) + ", " +
                                             std::to_string(t.max) + "]");
  }
  if (schema.simplex_sum()) {
    double sum = 0.0;
    for (double v : raw) sum += v;
    if (std::fabs(sum - *schema.simplex_sum()) > kSimplexTolerance)
      throw AuditError(Errc::SimplexViolation,
                       "values sum to " + std::to_string(sum) + ", expected " +
                           std::to_string(*schema.simplex_sum()));
  }
  return ScoreVector{raw};
}

double normalization_constant(const ScoreSchema& schema) {
  if (schema.simplex_sum()) return 2.0 * *schema.simplex_sum();
  double total = 0.0;
  for (const auto& t : schema.traits()) total += t.max - t.min;
  return total;
}

double l1_distance(const ScoreVector& a, const ScoreVector& b) {
  if (a.values.size() != b.values.size())
    throw AuditError(Errc::LengthMismatch, "L1 distance over unequal lengths");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d += std::fabs(a.values[i] - b.values[i]);
  return d;
}

}  // namespace stabaudit
