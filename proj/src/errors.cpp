#include "stabaudit/errors.hpp"

namespace stabaudit {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidSchema: return "InvalidSchema";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::SimplexViolation: return "SimplexViolation";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::AllZeroDifferences: return "AllZeroDifferences";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InvalidAlpha: return "InvalidAlpha";
    case Errc::ZeroTests: return "ZeroTests";
    case Errc::InvalidPValue: return "InvalidPValue";
    case Errc::TooFewPairs: return "TooFewPairs";
    case Errc::UnknownAttribute: return "UnknownAttribute";
    case Errc::InconsistentFamily: return "InconsistentFamily";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::UnknownFacet: return "UnknownFacet";
    case Errc::EmptyDistribution: return "EmptyDistribution";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::BadNumber: return "BadNumber";
    case Errc::DuplicateSubject: return "DuplicateSubject";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::BadTimestamp: return "BadTimestamp";
    case Errc::MissingFile: return "MissingFile";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadReport: return "BadReport";
    case Errc::IoFailure: return "IoFailure";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorClass error_class(Errc code) {
  switch (code) {
    case Errc::InvalidSchema:
    case Errc::InvalidAlpha:
    case Errc::ZeroTests:
    case Errc::UnknownFacet:
    case Errc::EmptyDistribution:
    case Errc::UnknownScenario:
    case Errc::UnknownAttribute:
    case Errc::BadConfig:
      return ErrorClass::Config;
    case Errc::LengthMismatch:
    case Errc::OutOfRange:
    case Errc::SimplexViolation:
    case Errc::SchemaMismatch:
    case Errc::EmptyIntersection:
    case Errc::TooFewSamples:
    case Errc::AllZeroDifferences:
    case Errc::ShapeMismatch:
    case Errc::InvalidPValue:
    case Errc::TooFewPairs:
    case Errc::EmptyInput:
    case Errc::MissingColumn:
    case Errc::BadNumber:
    case Errc::DuplicateSubject:
    case Errc::ValidationFailed:
    case Errc::BadTimestamp:
    case Errc::MissingFile:
    case Errc::BadReport:
      return ErrorClass::Data;
    case Errc::InconsistentFamily:
    case Errc::IoFailure:
    case Errc::Internal:
      return ErrorClass::Internal;
  }
  return ErrorClass::Internal;
}

}  // namespace stabaudit
