#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holoquilt {

enum class ErrorKind {
  kFileNotFound,
  kDecodeFailure,
  kUnsupportedBitDepth,
  kIoFailure,
  kInvalidArgument,
  kOddWidth,
  kMalformedJson,
  kMissingField,
  kInvariantViolation,
  kParseError,
  kCountMismatch,
  kDimensionMismatch,
  kBadMagic,
  kVersionMismatch,
  kTruncatedFile,
  kEntryOutOfRange,
  kDegenerateImage,
  kTOutOfRange,
  kSyntaxError,
  kMissingSection,
  kConflictingSources,
  kEmptySource,
};

std::string_view ToString(ErrorKind kind);

// Every library failure is reported as an Error. `detail` carries the
// offending field, section, index or line where one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string detail = {})
      : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace holoquilt
