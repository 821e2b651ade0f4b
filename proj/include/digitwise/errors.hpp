#pragma once

#include <stdexcept>
#include <string>

namespace digitwise {

// Problems with input data (files, logs, degenerate matrices). The CLI maps
// every DataError to exit code 2; std::invalid_argument is a usage error.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Bad magic, unknown version or unparseable metadata.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// Payload shorter than the header promises.
class TruncationError : public DataError {
 public:
  using DataError::DataError;
};

// Metadata disagrees with the binary header, or violates an invariant.
class MetadataError : public DataError {
 public:
  using DataError::DataError;
};

// Normal matrix is singular or too ill-conditioned to solve.
class SingularDataError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace digitwise
