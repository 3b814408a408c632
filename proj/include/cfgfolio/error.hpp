#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfgfolio {

enum class ErrorKind {
  kMissingFile,
  kMalformedRow,
  kDuplicateKey,
  kRangeViolation,
  kDuplicateTaskId,
  kDuplicateConfigId,
  kUnknownId,
  kEmptyColumn,
  kEmptyInput,
  kMissingEvaluation,
  kCoverageGap,
  kDimensionMismatch,
  kIndexOutOfRange,
  kEmptyPortfolio,
  kEmptyMatrix,
  kNonFinite,
  kSizeTooLarge,
  kInvalidOption,
  kEmptyTable,
  kEmptyModel,
  kVersionMismatch,
  kSchemaViolation,
  kEmptyList,
  kTooFewTasks,
  kUnknownTaskId,
  kTooFewAnchors,
  kInvalidShape,
  kLeakage,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every library failure is reported through this exception; callers switch
// on kind() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cfgfolio
