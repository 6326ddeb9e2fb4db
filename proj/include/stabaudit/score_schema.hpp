#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stabaudit {

/// One named trait with its numeric output range.
struct TraitSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;

  bool operator==(const TraitSpec&) const = default;
};

/// Declared output space of a scoring system: an ordered list of traits,
/// optionally constrained to sum to a fixed constant (a scaled simplex).
class ScoreSchema {
 public:
  /// Validates the declaration: at least one trait, unique nonempty names,
  /// min < max per trait, and simplex-compatible ranges when simplex_sum is
  /// set. Throws AuditError(InvalidSchema) otherwise.
  ScoreSchema(std::string system_name, std::vector<TraitSpec> traits,
              std::optional<double> simplex_sum = std::nullopt);

  const std::string& system_name() const { return system_name_; }
  const std::vector<TraitSpec>& traits() const { return traits_; }
  std::optional<double> simplex_sum() const { return simplex_sum_; }
  std::size_t trait_count() const { return traits_.size(); }

  /// Index of a trait by name, or nullopt.
  std::optional<std::size_t> trait_index(const std::string& name) const;

  bool operator==(const ScoreSchema&) const = default;

 private:
  std::string system_name_;
  std::vector<TraitSpec> traits_;
  std::optional<double> simplex_sum_;
};

/// One score output: trait values in schema order. Produced only through
/// validate_score_vector, so a ScoreVector is valid by construction.
struct ScoreVector {
  std::vector<double> values;

  bool operator==(const ScoreVector&) const = default;
};

/// Absolute tolerance on the simplex sum constraint. Vendors round the
/// scores they emit, so exact equality would reject honest inputs.
constexpr double kSimplexTolerance = 1e-6;

/// Checks raw values against the schema. No silent clamping: any violation
/// throws (LengthMismatch, OutOfRange, SimplexViolation).
ScoreVector validate_score_vector(const ScoreSchema& schema, const std::vector<double>& raw);

/// Maximum achievable L1 distance between two valid vectors: 2*S for a
/// simplex schema with sum S, otherwise the sum of the per-trait ranges.
double normalization_constant(const ScoreSchema& schema);

/// L1 distance between two vectors of equal length.
double l1_distance(const ScoreVector& a, const ScoreVector& b);

}  // namespace stabaudit
