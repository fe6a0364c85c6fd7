#pragma once

#include <stdexcept>
#include <string>

namespace artdir {

/// Base for all library errors. CLI maps DataError -> exit 2 and
/// DegenerateError -> exit 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed, missing, or inconsistent input data.
struct DataError : Error {
  using Error::Error;
};

/// Well-formed input on which the requested math is degenerate.
struct DegenerateError : Error {
  using Error::Error;
};

// geom
struct DegenerateDisplacement : DegenerateError {
  using DegenerateError::DegenerateError;
};

// kabsch
struct InsufficientPoints : DataError {
  using DataError::DataError;
};
struct DegenerateConfiguration : DegenerateError {
  using DegenerateError::DegenerateError;
};

// dirstat
struct DegenerateResultant : DegenerateError {
  using DegenerateError::DegenerateError;
};
struct NonConvergence : DegenerateError {
  using DegenerateError::DegenerateError;
};

// artsim
struct EmptyScene : DataError {
  using DataError::DataError;
};
struct NoComparablePoints : DataError {
  using DataError::DataError;
};

// pipeline
struct UnknownPart : DataError {
  using DataError::DataError;
};
struct NoValidGrasp : DegenerateError {
  using DegenerateError::DegenerateError;
};
struct InsufficientField : DataError {
  using DataError::DataError;
};
struct TooManyDegenerateSubsets : DegenerateError {
  using DegenerateError::DegenerateError;
};

// depthfit
struct InsufficientInliers : DegenerateError {
  using DegenerateError::DegenerateError;
};

// tacsim
struct JointLimit : Error {
  using Error::Error;
};

// harness
struct LengthMismatch : DataError {
  using DataError::DataError;
};
struct TooFewSamples : DataError {
  using DataError::DataError;
};
struct EmptyTable : DataError {
  using DataError::DataError;
};

}  // namespace artdir
