#include "srdf/types.hpp"

namespace srdf {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "model.NotSquare";
    case ErrorCode::NotSymmetric: return "model.NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "model.NotPositiveDefinite";
    case ErrorCode::IndexOutOfRange: return "model.IndexOutOfRange";
    case ErrorCode::InvalidSamplingSet: return "model.InvalidSamplingSet";
    case ErrorCode::SingularSigmaA: return "srdf_core.SingularSigmaA";
    case ErrorCode::EigenFailure: return "srdf_core.EigenFailure";
    case ErrorCode::BudgetOutOfRange: return "srdf_core.BudgetOutOfRange";
    case ErrorCode::InfeasibleDistortion: return "srdf_core.InfeasibleDistortion";
    case ErrorCode::DimensionMismatch: return "srdf_core.DimensionMismatch";
    case ErrorCode::QuadratureUnderResolved: return "gmf.QuadratureUnderResolved";
    case ErrorCode::DomainError: return "gmf.DomainError";
    case ErrorCode::InvalidField: return "gmf.InvalidField";
    case ErrorCode::GridTooLarge: return "universal.GridTooLarge";
    case ErrorCode::EmptyAtom: return "universal.EmptyAtom";
    case ErrorCode::NoPrior: return "universal.NoPrior";
    case ErrorCode::UnsupportedFamily: return "universal.UnsupportedFamily";
    case ErrorCode::InvalidFamily: return "universal.InvalidFamily";
    case ErrorCode::TooManySubsets: return "setopt.TooManySubsets";
    case ErrorCode::CodebookTooLarge: return "simulate.CodebookTooLarge";
    case ErrorCode::TrainingDiverged: return "simulate.TrainingDiverged";
    case ErrorCode::EmptyGrid: return "simulate.EmptyGrid";
    case ErrorCode::InvalidSimConfig: return "simulate.InvalidSimConfig";
    case ErrorCode::ConfigParse: return "cli.ConfigParse";
  }
  return "unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSigmaA:
    case ErrorCode::EigenFailure:
    case ErrorCode::QuadratureUnderResolved:
    case ErrorCode::TrainingDiverged:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace srdf
