// Copyright 2026 The privtext authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace privtext {

// Data-level failures (bad input files, malformed records, empty inputs).
// The CLI maps these to exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration-level failures (bad parameters, invalid config files).
// The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedRecord : DataError {
  using DataError::DataError;
};
struct DuplicateId : DataError {
  using DataError::DataError;
};
struct UnknownLabel : DataError {
  using DataError::DataError;
};
struct EmptySplit : ConfigError {
  using ConfigError::ConfigError;
};
struct MissingLexiconFile : ConfigError {
  using ConfigError::ConfigError;
};
struct EmptyPretrain : DataError {
  using DataError::DataError;
};
struct NonPositiveEpsilon : ConfigError {
  using ConfigError::ConfigError;
};
struct CalibrationDidNotConverge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewWorkers : ConfigError {
  using ConfigError::ConfigError;
};
struct MalformedAnnotationFile : DataError {
  using DataError::DataError;
};
struct UnknownItemId : DataError {
  using DataError::DataError;
};
struct NoAnnotations : DataError {
  using DataError::DataError;
};
struct EmptyInput : DataError {
  using DataError::DataError;
};
struct NonFiniteLikelihood : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingPrediction : DataError {
  using DataError::DataError;
};
struct IdMismatch : DataError {
  using DataError::DataError;
};

}  // namespace privtext
