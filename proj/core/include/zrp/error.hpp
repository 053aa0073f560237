#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zrp {

enum class Errc {
  kInvalidArgument,
  kNonpositiveRate,
  kConditionLGViolated,
  kConditionMViolated,
  kTruncationInsufficient,
  kOutOfRange,
  kStateSpaceTooLarge,
  kEventBudgetExceeded,
  kCFLFailure,
  kNegativeDensity,
  kUnsupportedKernel,
  kInsufficientSnapshots,
  kNotReversible,
  kEmptySample,
  kGridMismatch,
  kConfigParse,
  kUnknownBuiltin,
  kIo,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures surface as zrp::Error. `index()` carries the offending
// lattice index, occupancy or config line when the failure has one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::int64_t> index = std::nullopt)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::int64_t> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<std::int64_t> index_;
};

inline std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kNonpositiveRate: return "NonpositiveRate";
    case Errc::kConditionLGViolated: return "ConditionLGViolated";
    case Errc::kConditionMViolated: return "ConditionMViolated";
    case Errc::kTruncationInsufficient: return "TruncationInsufficient";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case Errc::kEventBudgetExceeded: return "EventBudgetExceeded";
    case Errc::kCFLFailure: return "CFLFailure";
    case Errc::kNegativeDensity: return "NegativeDensity";
    case Errc::kUnsupportedKernel: return "UnsupportedKernel";
    case Errc::kInsufficientSnapshots: return "InsufficientSnapshots";
    case Errc::kNotReversible: return "NotReversible";
    case Errc::kEmptySample: return "EmptySample";
    case Errc::kGridMismatch: return "GridMismatch";
    case Errc::kConfigParse: return "ConfigParse";
    case Errc::kUnknownBuiltin: return "UnknownBuiltin";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace zrp
