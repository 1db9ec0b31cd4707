#include "error.hpp"

namespace sentikit {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::BadEncoding: return "BadEncoding";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::FoldTooLarge: return "FoldTooLarge";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::ZeroDf: return "ZeroDf";
    case ErrorCode::MissingClass: return "MissingClass";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::TooFewFolds: return "TooFewFolds";
    case ErrorCode::BadModelFile: return "BadModelFile";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::TrainingFailed: return "TrainingFailed";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sentikit
