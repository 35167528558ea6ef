#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quadtmf {

enum class ErrorCode {
  SingularMatrix,
  DimensionMismatch,
  NonEvenDiagonal,
  NotUnimodular,
  BudgetExceeded,
  IllegalMove,
  ValidationError,
  OutOfRange,
  ShapeMismatch,
  UnknownName,
  NonUnitLeading,
  NotPositiveDefinite,
  NotEven,
  PreconditionFailed,
  NotInUpperHalfPlane,
  TailBoundTooLarge,
  NotSL2,
  InclusionNotIsometric,
  ParseError,
  Overflow,
};

std::string_view to_string(ErrorCode code);

/// Domain error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Outcome of a bounded decision procedure: either a definite answer or an
/// explicit "search exhausted" value. Inconclusive is a result, not an error.
class Decision {
 public:
  static Decision decided(bool value) { return Decision(value, {}); }
  static Decision inconclusive(std::string reason) {
    return Decision(std::nullopt, std::move(reason));
  }

  bool is_decided() const noexcept { return value_.has_value(); }
  bool is_true() const noexcept { return value_ == true; }
  bool is_false() const noexcept { return value_ == false; }
  /// Throws std::logic_error when inconclusive.
  bool value() const;
  const std::string& reason() const noexcept { return reason_; }

  std::string to_string() const;

  friend bool operator==(const Decision&, const Decision&) = default;

 private:
  Decision(std::optional<bool> value, std::string reason)
      : value_(value), reason_(std::move(reason)) {}

  std::optional<bool> value_;
  std::string reason_;
};

}  // namespace quadtmf
