#include "holoquilt/error.hpp"

namespace holoquilt {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFileNotFound: return "file-not-found";
    case ErrorKind::kDecodeFailure: return "decode-failure";
    case ErrorKind::kUnsupportedBitDepth: return "unsupported-bit-depth";
    case ErrorKind::kIoFailure: return "io-failure";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kOddWidth: return "odd-width";
    case ErrorKind::kMalformedJson: return "malformed-json";
    case ErrorKind::kMissingField: return "missing-field";
    case ErrorKind::kInvariantViolation: return "invariant-violation";
    case ErrorKind::kParseError: return "parse-error";
    case ErrorKind::kCountMismatch: return "count-mismatch";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kBadMagic: return "bad-magic";
    case ErrorKind::kVersionMismatch: return "version-mismatch";
    case ErrorKind::kTruncatedFile: return "truncated-file";
    case ErrorKind::kEntryOutOfRange: return "entry-out-of-range";
    case ErrorKind::kDegenerateImage: return "degenerate-image";
    case ErrorKind::kTOutOfRange: return "t-out-of-range";
    case ErrorKind::kSyntaxError: return "syntax-error";
    case ErrorKind::kMissingSection: return "missing-section";
    case ErrorKind::kConflictingSources: return "conflicting-sources";
    case ErrorKind::kEmptySource: return "empty-source";
  }
  return "unknown";
}

}  // namespace holoquilt
