#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eqrec {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kZeroDemandValue,
  kNegativeEndowment,
  kNotAnEquilibrium,
  kRankDeficiency,
  kSupportMismatch,
  kEmptySupport,
  kNoMoneySupply,
  kNotIrreducible,
  kNoConvergence,
  kNotInCone,
  kNoPositivePrice,
  kPreconditionFailed,
  kVerificationFailed,
  kBlockMismatch,
  kZeroDenominator,
  kRhoNotOne,
  kNonpositiveGdp,
  kSchemaError,
  kNegativeValue,
  kConfigError,
  kUnknownFixture,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroDemandValue: return "ZeroDemandValue";
    case ErrorCode::kNegativeEndowment: return "NegativeEndowment";
    case ErrorCode::kNotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::kRankDeficiency: return "RankDeficiency";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kNoMoneySupply: return "NoMoneySupply";
    case ErrorCode::kNotIrreducible: return "NotIrreducible";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNotInCone: return "NotInCone";
    case ErrorCode::kNoPositivePrice: return "NoPositivePrice";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kBlockMismatch: return "BlockMismatch";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kRhoNotOne: return "RhoNotOne";
    case ErrorCode::kNonpositiveGdp: return "NonpositiveGDP";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kNegativeValue: return "NegativeValue";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kUnknownFixture: return "UnknownFixture";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Schema failures remember where in the input they happened (1-based, 0 = unknown).
class SchemaError : public Error {
 public:
  SchemaError(std::size_t row, std::size_t col, const std::string& reason)
      : Error(ErrorCode::kSchemaError, "row " + std::to_string(row) + ", column " +
                                           std::to_string(col) + ": " + reason),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace eqrec
