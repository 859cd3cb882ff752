#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srdf {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

enum class ErrorCode {
  // model
  NotSquare,
  NotSymmetric,
  NotPositiveDefinite,
  IndexOutOfRange,
  InvalidSamplingSet,
  // srdf_core
  SingularSigmaA,
  EigenFailure,
  BudgetOutOfRange,
  InfeasibleDistortion,
  DimensionMismatch,
  // gmf
  QuadratureUnderResolved,
  DomainError,
  InvalidField,
  // universal
  GridTooLarge,
  EmptyAtom,
  NoPrior,
  UnsupportedFamily,
  InvalidFamily,
  // setopt
  TooManySubsets,
  // simulate
  CodebookTooLarge,
  TrainingDiverged,
  EmptyGrid,
  InvalidSimConfig,
  // cli
  ConfigParse,
};

/// Module-qualified name, e.g. "model.NotPositiveDefinite".
std::string_view error_name(ErrorCode code);

/// Numerical failures map to CLI exit status 3; everything else is a
/// validation problem (exit status 2).
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace srdf
