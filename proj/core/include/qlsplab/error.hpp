#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qlsplab {

enum class ErrorCode {
  kNotABijection,
  kBadShape,
  kIndexOutOfRange,
  kBadK,
  kTooLarge,
  kSingularMatrix,
  kBadEps,
  kNotUnitary,
  kNormTooLarge,
  kBadParameters,
  kBadKappa,
  kSchemaError,
  kIoError,
};

const char* to_string(ErrorCode code);

// Base of every error thrown by the library. `code()` identifies the kind;
// the concrete subclasses below exist so callers can catch one kind only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode Code>
class CodedError : public Error {
 public:
  explicit CodedError(const std::string& message) : Error(Code, message) {}
};

using BadShape = CodedError<ErrorCode::kBadShape>;
using IndexOutOfRange = CodedError<ErrorCode::kIndexOutOfRange>;
using BadK = CodedError<ErrorCode::kBadK>;
using TooLarge = CodedError<ErrorCode::kTooLarge>;
using SingularMatrix = CodedError<ErrorCode::kSingularMatrix>;
using BadEps = CodedError<ErrorCode::kBadEps>;
using NotUnitary = CodedError<ErrorCode::kNotUnitary>;
using NormTooLarge = CodedError<ErrorCode::kNormTooLarge>;
using BadParameters = CodedError<ErrorCode::kBadParameters>;
using BadKappa = CodedError<ErrorCode::kBadKappa>;
using IoError = CodedError<ErrorCode::kIoError>;

/// Raised when a permutation table repeats or omits a value. `index()` is the
/// 1-based position of the offending table in its chain (0 when standalone).
class NotABijection : public Error {
 public:
  NotABijection(std::int64_t index, const std::string& message)
      : Error(ErrorCode::kNotABijection, message), index_(index) {}

  std::int64_t index() const noexcept { return index_; }

 private:
  std::int64_t index_;
};

/// Schema violation in a JSON document; `field()` names the offending key path.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& message)
      : Error(ErrorCode::kSchemaError, field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qlsplab
