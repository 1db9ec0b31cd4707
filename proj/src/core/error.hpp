#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sentikit {

enum class ErrorCode {
  InvalidArgument,
  FileNotFound,
  BadEncoding,
  MissingColumn,
  UnknownLabel,
  EmptyText,
  EmptyCorpus,
  EmptyClass,
  FoldTooLarge,
  EmptyTrainingSet,
  ZeroDf,
  MissingClass,
  DimMismatch,
  EmptySequence,
  LengthMismatch,
  Empty,
  EmptyMatrix,
  TooFewFolds,
  BadModelFile,
  FingerprintMismatch,
  TrainingFailed,
  Io,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Row-level loader failure; row is the 0-based data row index.
class RowError : public Error {
 public:
  RowError(ErrorCode code, std::size_t row, const std::string &what)
      : Error(code, what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace sentikit
