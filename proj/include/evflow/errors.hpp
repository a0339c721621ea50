#pragma once

#include <stdexcept>
#include <string>

namespace evflow {

// Every failure the library can raise, grouped by the exit code the CLI maps
// it to: input/validation problems exit 2, numerical problems exit 3.
enum class Err {
  // validation / input
  DimensionMismatch,
  RankMismatch,
  RankTooHigh,
  NonPositiveScale,
  IndexOutOfRange,
  OutOfRange,
  DomainError,
  ZeroVector,
  VectorsMissing,
  TooFewGridPoints,
  GridTooCoarse,
  DegenerateDesign,
  IoError,
  RowCountMismatch,
  ParseError,
  // numerical
  NonFinite,
  NoConvergence,
  NotPositiveDefinite,
  ZeroRowSum,
  DegenerateData,
  NumericalUnderflow,
  BeamExhausted,
  AllCommon,
  AllNonCommon,
  EmptyCommonSet,
};

const char* err_name(Err e);

// True for conditions caused by bad input rather than by numerics.
bool is_validation_error(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg),
        code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace evflow
