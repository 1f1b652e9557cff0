#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualdi {

enum class Errc {
  // manifest / frame loading
  MissingColumn,
  NonIntegerIndex,
  OrderingViolation,
  DuplicateSequenceId,
  AnnotationOutOfRange,
  MissingDirectory,
  EmptyDirectory,
  UndecodableImage,
  InconsistentDimensions,
  IoError,
  // raster primitives
  AlreadyGrayscale,
  ZeroDimension,
  AngleOutOfRange,
  // pooling
  ZeroLength,
  LengthMismatch,
  EmptyInput,
  // synthesis
  TooManyClasses,
  InvalidParams,
  IndexOutOfRange,
  // evaluation
  EmptyMatrix,
  NoIncludedClasses,
  TooFewSamples,
  TooFewSubjects,
  // classifier
  DimensionMismatch,
  EmptyBatch,
  InsufficientData,
  SingleClass,
  CorruptCheckpoint,
  // generic
  InvalidArgument,
};

/// Coarse grouping used by the command-line tool to pick an exit code.
enum class ErrorKind { Config, Data, Training };

std::string_view errc_name(Errc code) noexcept;
ErrorKind error_kind(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  /// what() without the leading code name.
  const std::string& detail() const noexcept { return detail_; }
  ErrorKind kind() const noexcept { return error_kind(code_); }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace dualdi
