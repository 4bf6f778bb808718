#include "qlsplab/error.hpp"

namespace qlsplab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotABijection: return "NotABijection";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kBadK: return "BadK";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kBadEps: return "BadEps";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kNormTooLarge: return "NormTooLarge";
    case ErrorCode::kBadParameters: return "BadParameters";
    case ErrorCode::kBadKappa: return "BadKappa";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qlsplab
