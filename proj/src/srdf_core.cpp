#include "srdf/srdf_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace srdf {

namespace {

Eigen::LLT<Matrix> factor_sampled(const Matrix& sigmaA) {
  Eigen::LLT<Matrix> llt(sigmaA);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSigmaA, "sampled block is not positive definite");
  return llt;
}

Vector sorted_descending(Vector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

// Exact water level once the set of modes above the water is known.
// Returns a negative value if no active-set size is consistent.
double exact_level_for_budget(const Vector& lambdas, double budget) {
  const Eigen::Index k = lambdas.size();
  double tail = lambdas.sum();
  for (Eigen::Index j = 1; j <= k; ++j) {
    tail -= lambdas(j - 1);
    const double alpha = (budget - tail) / static_cast<double>(j);
    const double next = j < k ? lambdas(j) : 0.0;
    if (alpha >= next && alpha <= lambdas(j - 1)) return alpha;
  }
  return -1.0;
}

double exact_level_for_rate(const Vector& lambdas, double rateBits) {
  const Eigen::Index k = lambdas.size();
  double logSum = 0.0;
  for (Eigen::Index j = 1; j <= k; ++j) {
    logSum += std::log2(lambdas(j - 1));
    const double alpha = std::exp2((logSum - 2.0 * rateBits) / static_cast<double>(j));
    const double next = j < k ? lambdas(j) : 0.0;
    if (alpha >= next && alpha <= lambdas(j - 1)) return alpha;
  }
  return -1.0;
}

double rate_at_level(const Vector& lambdas, double alpha) {
  double rate = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    if (lambdas(i) > alpha) rate += 0.5 * std::log2(lambdas(i) / alpha);
  return rate;
}

double sum_min(const Vector& lambdas, double alpha) { return lambdas.cwiseMin(alpha).sum(); }

}  // namespace

WeightMatrix weight_matrix(const Matrix& sigmaA, const Matrix& sigmaAAc) {
  const Eigen::Index k = sigmaA.rows();
  if (sigmaA.cols() != k || sigmaAAc.rows() != k)
    throw Error(ErrorCode::DimensionMismatch, "weight_matrix: block shapes disagree");
  Matrix g = Matrix::Identity(k, k);
  if (sigmaAAc.cols() > 0) {
    const Matrix x = factor_sampled(sigmaA).solve(sigmaAAc);
    g.noalias() += x * x.transpose();
  }
  return WeightMatrix{0.5 * (g + g.transpose())};
}

WeightMatrix weight_matrix(const BlockPartition& bp) { return weight_matrix(bp.sigmaA, bp.sigmaAAc); }

double min_distortion(const BlockPartition& bp) {
  if (bp.unsampled() == 0) return 0.0;
  const Matrix x = factor_sampled(bp.sigmaA).solve(bp.sigmaAAc);
  const double explained = bp.sigmaAAc.cwiseProduct(x).sum();
  return std::max(0.0, bp.sigmaAc.trace() - explained);
}

double max_distortion(const CovarianceModel& model) { return model.sigma().trace(); }

Vector congruent_eigenvalues(const Matrix& sigmaA, const WeightMatrix& weights) {
  Eigen::SelfAdjointEigenSolver<Matrix> sq(sigmaA);
  if (sq.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigendecomposition of sampled block failed");
  const Matrix root = sq.operatorSqrt();
  Matrix b = root * weights.g * root;
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigendecomposition of weighted block failed");
  Vector lambdas = sorted_descending(es.eigenvalues());
  if (!(lambdas.minCoeff() > 0.0)) throw Error(ErrorCode::EigenFailure, "nonpositive weighted eigenvalue");
  return lambdas;
}

Vector srdf_eigenvalues(const BlockPartition& bp) { return congruent_eigenvalues(bp.sigmaA, weight_matrix(bp)); }

WaterfillSolution waterfill(const Vector& lambdasIn, double budget) {
  if (lambdasIn.size() == 0 || !(lambdasIn.minCoeff() > 0.0))
    throw Error(ErrorCode::BudgetOutOfRange, "waterfill needs a nonempty positive spectrum");
  const Vector lambdas = sorted_descending(lambdasIn);
  const double total = lambdas.sum();
  const double top = lambdas(0);
  if (!(budget > 0.0) || budget > total * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "budget " << budget << " outside (0, " << total << "]";
    throw Error(ErrorCode::BudgetOutOfRange, os.str());
  }

  WaterfillSolution sol;
  sol.lambdas = lambdas;
  if (budget >= total) {
    sol.alpha = top;
  } else {
    const auto k = static_cast<double>(lambdas.size());
    double lo = budget / k * 1e-6;
    double hi = top;
    for (int it = 0; it < kWaterfillMaxIter && hi - lo > kWaterfillRelTol * top; ++it) {
      const double mid = 0.5 * (lo + hi);
      (sum_min(lambdas, mid) < budget ? lo : hi) = mid;
    }
    sol.alpha = 0.5 * (lo + hi);
    // Bisection fixes the active set; solve the linear equation on it exactly.
    const double exact = exact_level_for_budget(lambdas, budget);
    if (exact > 0.0 && std::abs(exact - sol.alpha) <= 1e-6 * top) sol.alpha = exact;
  }
  sol.perModeDistortion = lambdas.cwiseMin(sol.alpha);
  sol.rateBits = rate_at_level(lambdas, sol.alpha);
  return sol;
}

SrdfPoint srdf_from_spectrum(const Vector& lambdas, double deltaMin, double deltaMax, double delta) {
  if (!(delta > deltaMin)) {
    std::ostringstream os;
    os << "delta " << delta << " <= minimum distortion " << deltaMin;
    throw Error(ErrorCode::InfeasibleDistortion, os.str());
  }
  SrdfPoint pt;
  pt.delta = delta;
  pt.deltaMin = deltaMin;
  pt.deltaMax = deltaMax;
  if (delta >= deltaMax) {
    pt.trivial = true;
    pt.waterfill = waterfill(lambdas, lambdas.sum());
    pt.rateBits = 0.0;
    return pt;
  }
  pt.waterfill = waterfill(lambdas, std::min(delta - deltaMin, lambdas.sum()));
  pt.rateBits = pt.waterfill.rateBits;
  return pt;
}

SrdfPoint srdf(const CovarianceModel& model, const SamplingSet& set, double delta) {
  const BlockPartition bp = partition(model, set);
  return srdf_from_spectrum(srdf_eigenvalues(bp), min_distortion(bp), max_distortion(model), delta);
}

double distortion_rate(const Vector& lambdasIn, double deltaMin, double rateBits) {
  const Vector lambdas = sorted_descending(lambdasIn);
  if (!(rateBits > 0.0)) return deltaMin + lambdas.sum();
  if (rateBits >= kRateCapBits) return deltaMin;

  // Bisection on log(alpha); the rate is decreasing in alpha.
  const double top = lambdas(0);
  double lo = std::log(top) - 2.0 * std::log(2.0) * kRateCapBits;
  double hi = std::log(top);
  for (int it = 0; it < kWaterfillMaxIter && hi - lo > kWaterfillRelTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate_at_level(lambdas, std::exp(mid)) > rateBits ? lo : hi) = mid;
  }
  double alpha = std::exp(0.5 * (lo + hi));
  const double exact = exact_level_for_rate(lambdas, rateBits);
  if (exact > 0.0 && std::abs(exact - alpha) <= 1e-6 * top) alpha = exact;
  return deltaMin + sum_min(lambdas, alpha);
}

double distortion_rate(const CovarianceModel& model, const SamplingSet& set, double rateBits) {
  const BlockPartition bp = partition(model, set);
  return distortion_rate(srdf_eigenvalues(bp), min_distortion(bp), rateBits);
}

Matrix correlation_covariance(const Vector& sigmas, const Matrix& correlations) {
  const Eigen::Index m = sigmas.size();
  if (correlations.rows() != m || correlations.cols() != m)
    throw Error(ErrorCode::DimensionMismatch, "correlation matrix shape does not match sigmas");
  Matrix sigma(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      sigma(i, j) = (i == j ? 1.0 : correlations(i, j)) * sigmas(i) * sigmas(j);
  return sigma;
}

double example1_closed_form(const Vector& sigmas, const Matrix& correlations, Eigen::Index j, double delta) {
  const Eigen::Index m = sigmas.size();
  if (j < 0 || j >= m) throw Error(ErrorCode::IndexOutOfRange, "component index outside model");
  double numerator = sigmas(j) * sigmas(j);
  double deltaMin = 0.0;
  double deltaMax = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double var = sigmas(i) * sigmas(i);
    deltaMax += var;
    if (i == j) continue;
    const double r2 = correlations(i, j) * correlations(i, j);
    numerator += r2 * var;
    deltaMin += var * (1.0 - r2);
  }
  if (!(delta > deltaMin)) throw Error(ErrorCode::InfeasibleDistortion, "delta at or below the MMSE floor");
  if (delta >= deltaMax) return 0.0;
  return 0.5 * std::log2(numerator / (delta - deltaMin));
}

}  // namespace srdf
