#pragma once

#include "srdf/model.hpp"

namespace srdf {

/// Water-level bisection limits.
inline constexpr int kWaterfillMaxIter = 200;
inline constexpr double kWaterfillRelTol = 1e-14;
/// distortion_rate() returns the MMSE floor for rates at or above this cap.
inline constexpr double kRateCapBits = 64.0;

/// Weight matrix G_A of the sampled-space quadratic distortion.
struct WeightMatrix {
  Matrix g;
};

/// Reverse water-filling over eigenmodes. All rates in bits.
struct WaterfillSolution {
  Vector lambdas;            // descending
  double alpha = 0.0;        // water level
  Vector perModeDistortion;  // min(alpha, lambda_i)
  double rateBits = 0.0;
};

struct SrdfPoint {
  double delta = 0.0;
  double rateBits = 0.0;
  double deltaMin = 0.0;
  double deltaMax = 0.0;
  /// delta >= deltaMax: zero rate suffices.
  bool trivial = false;
  WaterfillSolution waterfill;
};

/// G_A = I + S^{-1} C C^T S^{-1} for sampled covariance S and cross block C.
WeightMatrix weight_matrix(const Matrix& sigmaA, const Matrix& sigmaAAc);
WeightMatrix weight_matrix(const BlockPartition& bp);

/// MMSE floor: trace(sigmaAc) - trace(C^T S^{-1} C).
double min_distortion(const BlockPartition& bp);
double max_distortion(const CovarianceModel& model);

/// Spectrum of G S computed from the symmetric similar matrix S^{1/2} G S^{1/2},
/// sorted descending.
Vector congruent_eigenvalues(const Matrix& sigmaA, const WeightMatrix& weights);
Vector srdf_eigenvalues(const BlockPartition& bp);

/// Finds alpha with sum_i min(alpha, lambda_i) = budget.
/// Requires 0 < budget <= sum(lambdas).
WaterfillSolution waterfill(const Vector& lambdas, double budget);

/// Rate at total distortion `delta` for a sampled source whose weighted
/// spectrum is `lambdas` and whose MMSE floor is `deltaMin`.
SrdfPoint srdf_from_spectrum(const Vector& lambdas, double deltaMin, double deltaMax, double delta);

SrdfPoint srdf(const CovarianceModel& model, const SamplingSet& set, double delta);

/// Inverse of the rate-distortion curve: deltaMin + sum_i min(alpha(R), lambda_i).
double distortion_rate(const Vector& lambdas, double deltaMin, double rateBits);
double distortion_rate(const CovarianceModel& model, const SamplingSet& set, double rateBits);

/// Weighted squared error (x - y)^T G (x - y).
template <typename DerivedX, typename DerivedY>
double eval_dA(const WeightMatrix& weights, const Eigen::MatrixBase<DerivedX>& x,
               const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != weights.g.rows() || y.size() != weights.g.rows())
    throw Error(ErrorCode::DimensionMismatch, "eval_dA: vector length does not match weight matrix");
  const Vector diff = (x - y).template cast<double>();
  return diff.dot(weights.g * diff);
}

/// Builds Sigma_ij = r_ij sigma_i sigma_j (r_ii = 1).
Matrix correlation_covariance(const Vector& sigmas, const Matrix& correlations);

/// Closed-form single-component SRDf for the correlation-parameterized model:
/// 1/2 log2((sigma_j^2 + sum_{i!=j} r_ij^2 sigma_i^2) / (delta - deltaMin_j)).
double example1_closed_form(const Vector& sigmas, const Matrix& correlations, Eigen::Index j,
                            double delta);

}  // namespace srdf
