#pragma once

#include <stdexcept>
#include <string>

namespace stabaudit {

/// Machine-readable failure reasons raised by the toolkit.
enum class Errc {
  // schema / score validation
  InvalidSchema,
  LengthMismatch,
  OutOfRange,
  SimplexViolation,
  // run pairing
  SchemaMismatch,
  EmptyIntersection,
  // statistical kernels
  TooFewSamples,
  AllZeroDifferences,
  ShapeMismatch,
  InvalidAlpha,
  ZeroTests,
  InvalidPValue,
  // auditor
  TooFewPairs,
  UnknownAttribute,
  InconsistentFamily,
  EmptyInput,
  // synthetic ADS
  UnknownFacet,
  EmptyDistribution,
  UnknownScenario,
  // ingestion / configuration
  MissingColumn,
  BadNumber,
  DuplicateSubject,
  ValidationFailed,
  BadTimestamp,
  MissingFile,
  BadConfig,
  BadReport,
  IoFailure,
  Internal,
};

const char* errc_name(Errc code);

/// Coarse failure class used for process exit codes:
/// 2 = configuration error, 3 = data error, 4 = internal error.
enum class ErrorClass { Config = 2, Data = 3, Internal = 4 };

ErrorClass error_class(Errc code);

class AuditError : public std::runtime_error {
 public:
  AuditError(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace stabaudit
