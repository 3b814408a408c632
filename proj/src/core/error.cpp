#include "cfgfolio/error.hpp"

namespace cfgfolio {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingFile:
      return "MissingFile";
    case ErrorKind::kMalformedRow:
      return "MalformedRow";
    case ErrorKind::kDuplicateKey:
      return "DuplicateKey";
    case ErrorKind::kRangeViolation:
      return "RangeViolation";
    case ErrorKind::kDuplicateTaskId:
      return "DuplicateTaskId";
    case ErrorKind::kDuplicateConfigId:
      return "DuplicateConfigId";
    case ErrorKind::kUnknownId:
      return "UnknownId";
    case ErrorKind::kEmptyColumn:
      return "EmptyColumn";
    case ErrorKind::kEmptyInput:
      return "EmptyInput";
    case ErrorKind::kMissingEvaluation:
      return "MissingEvaluation";
    case ErrorKind::kCoverageGap:
      return "CoverageGap";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorKind::kEmptyPortfolio:
      return "EmptyPortfolio";
    case ErrorKind::kEmptyMatrix:
      return "EmptyMatrix";
    case ErrorKind::kNonFinite:
      return "NonFinite";
    case ErrorKind::kSizeTooLarge:
      return "SizeTooLarge";
    case ErrorKind::kInvalidOption:
      return "InvalidOption";
    case ErrorKind::kEmptyTable:
      return "EmptyTable";
    case ErrorKind::kEmptyModel:
      return "EmptyModel";
    case ErrorKind::kVersionMismatch:
      return "VersionMismatch";
    case ErrorKind::kSchemaViolation:
      return "SchemaViolation";
    case ErrorKind::kEmptyList:
      return "EmptyList";
    case ErrorKind::kTooFewTasks:
      return "TooFewTasks";
    case ErrorKind::kUnknownTaskId:
      return "UnknownTaskId";
    case ErrorKind::kTooFewAnchors:
      return "TooFewAnchors";
    case ErrorKind::kInvalidShape:
      return "InvalidShape";
    case ErrorKind::kLeakage:
      return "Leakage";
    case ErrorKind::kIo:
      return "Io";
  }
  return "Unknown";
}

}  // namespace cfgfolio
