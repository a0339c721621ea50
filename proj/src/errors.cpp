#include "evflow/errors.hpp"

namespace evflow {

const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::RankMismatch: return "RankMismatch";
    case Err::RankTooHigh: return "RankTooHigh";
    case Err::NonPositiveScale: return "NonPositiveScale";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::OutOfRange: return "OutOfRange";
    case Err::DomainError: return "DomainError";
    case Err::ZeroVector: return "ZeroVector";
    case Err::VectorsMissing: return "VectorsMissing";
    case Err::TooFewGridPoints: return "TooFewGridPoints";
    case Err::GridTooCoarse: return "GridTooCoarse";
    case Err::DegenerateDesign: return "DegenerateDesign";
    case Err::IoError: return "IoError";
    case Err::RowCountMismatch: return "RowCountMismatch";
    case Err::ParseError: return "ParseError";
    case Err::NonFinite: return "NonFinite";
    case Err::NoConvergence: return "NoConvergence";
    case Err::NotPositiveDefinite: return "NotPositiveDefinite";
    case Err::ZeroRowSum: return "ZeroRowSum";
    case Err::DegenerateData: return "DegenerateData";
    case Err::NumericalUnderflow: return "NumericalUnderflow";
    case Err::BeamExhausted: return "BeamExhausted";
    case Err::AllCommon: return "AllCommon";
    case Err::AllNonCommon: return "AllNonCommon";
    case Err::EmptyCommonSet: return "EmptyCommonSet";
  }
  return "Unknown";
}

bool is_validation_error(Err e) {
  switch (e) {
    case Err::DimensionMismatch:
    case Err::RankMismatch:
    case Err::RankTooHigh:
    case Err::NonPositiveScale:
    case Err::IndexOutOfRange:
    case Err::OutOfRange:
    case Err::DomainError:
    case Err::ZeroVector:
    case Err::VectorsMissing:
    case Err::TooFewGridPoints:
    case Err::GridTooCoarse:
    case Err::DegenerateDesign:
    case Err::IoError:
    case Err::RowCountMismatch:
    case Err::ParseError:
      return true;
    default:
      return false;
  }
}

}  // namespace evflow
