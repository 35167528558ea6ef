#include "quadtmf/error.hpp"

namespace quadtmf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonEvenDiagonal: return "NonEvenDiagonal";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::NonUnitLeading: return "NonUnitLeading";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotEven: return "NotEven";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotInUpperHalfPlane: return "NotInUpperHalfPlane";
    case ErrorCode::TailBoundTooLarge: return "TailBoundTooLarge";
    case ErrorCode::NotSL2: return "NotSL2";
    case ErrorCode::InclusionNotIsometric: return "InclusionNotIsometric";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "Unknown";
}

bool Decision::value() const {
  if (!value_) throw std::logic_error("Decision::value() on an inconclusive result: " + reason_);
  return *value_;
}

std::string Decision::to_string() const {
  if (!value_) return "Inconclusive";
  return *value_ ? "Decided(true)" : "Decided(false)";
}

}  // namespace quadtmf
