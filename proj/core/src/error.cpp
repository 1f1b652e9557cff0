#include "dualdi/error.hpp"

namespace dualdi {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::NonIntegerIndex: return "NonIntegerIndex";
    case Errc::OrderingViolation: return "OrderingViolation";
    case Errc::DuplicateSequenceId: return "DuplicateSequenceId";
    case Errc::AnnotationOutOfRange: return "AnnotationOutOfRange";
    case Errc::MissingDirectory: return "MissingDirectory";
    case Errc::EmptyDirectory: return "EmptyDirectory";
    case Errc::UndecodableImage: return "UndecodableImage";
    case Errc::InconsistentDimensions: return "InconsistentDimensions";
    case Errc::IoError: return "IoError";
    case Errc::AlreadyGrayscale: return "AlreadyGrayscale";
    case Errc::ZeroDimension: return "ZeroDimension";
    case Errc::AngleOutOfRange: return "AngleOutOfRange";
    case Errc::ZeroLength: return "ZeroLength";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::TooManyClasses: return "TooManyClasses";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::NoIncludedClasses: return "NoIncludedClasses";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::TooFewSubjects: return "TooFewSubjects";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::SingleClass: return "SingleClass";
    case Errc::CorruptCheckpoint: return "CorruptCheckpoint";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorKind error_kind(Errc code) noexcept {
  switch (code) {
    case Errc::MissingColumn:
    case Errc::NonIntegerIndex:
    case Errc::OrderingViolation:
    case Errc::DuplicateSequenceId:
    case Errc::AnnotationOutOfRange:
    case Errc::MissingDirectory:
    case Errc::EmptyDirectory:
    case Errc::UndecodableImage:
    case Errc::InconsistentDimensions:
    case Errc::IoError:
    case Errc::CorruptCheckpoint:
      return ErrorKind::Data;
    case Errc::InsufficientData:
    case Errc::SingleClass:
    case Errc::EmptyBatch:
    case Errc::DimensionMismatch:
      return ErrorKind::Training;
    default:
      return ErrorKind::Config;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), detail_(what) {}

}  // namespace dualdi
