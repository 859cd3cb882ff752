#pragma once

#include "srdf/types.hpp"

#include <Eigen/Cholesky>

#include <cstddef>
#include <vector>

namespace srdf {

/// Relative asymmetry (w.r.t. max |entry|) absorbed by symmetrization.
inline constexpr double kSymTol = 1e-9;
/// Cholesky pivots must exceed kPdTolScale * trace / m.
inline constexpr double kPdTolScale = 1e-12;

/// Zero-mean Gaussian source law N(0, sigma). Immutable once validated.
class CovarianceModel {
 public:
  Eigen::Index dim() const { return sigma_.rows(); }
  const Matrix& sigma() const { return sigma_; }
  /// Lower-triangular Cholesky factor L with sigma = L L^T.
  const Matrix& cholesky() const { return chol_; }
  const std::vector<std::string>& labels() const { return labels_; }

  friend CovarianceModel validate_covariance(const Matrix& raw, std::vector<std::string> labels);

 private:
  CovarianceModel() = default;

  Matrix sigma_;
  Matrix chol_;
  std::vector<std::string> labels_;
};

/// Checks squareness, symmetry (within kSymTol) and positive definiteness,
/// then stores the symmetrized matrix and its Cholesky factor.
CovarianceModel validate_covariance(const Matrix& raw, std::vector<std::string> labels = {});

/// Ordered subset A of {0..m-1}. External (CLI) indices are 1-based.
class SamplingSet {
 public:
  /// `indices` are 0-based, strictly increasing, within [0, dim).
  SamplingSet(std::vector<Eigen::Index> indices, Eigen::Index dim);

  static SamplingSet from_one_based(const std::vector<long>& indices, Eigen::Index dim);
  static SamplingSet all(Eigen::Index dim);

  Eigen::Index size() const { return static_cast<Eigen::Index>(indices_.size()); }
  Eigen::Index dim() const { return dim_; }
  const std::vector<Eigen::Index>& indices() const { return indices_; }
  /// Complement M \ A in increasing order.
  const std::vector<Eigen::Index>& complement() const { return complement_; }
  std::vector<long> one_based() const;

  bool operator==(const SamplingSet& other) const = default;

 private:
  std::vector<Eigen::Index> indices_;
  std::vector<Eigen::Index> complement_;
  Eigen::Index dim_ = 0;
};

/// Covariance blocks under the permutation (A, A^c).
struct BlockPartition {
  SamplingSet set;
  Matrix sigmaA;    // k x k
  Matrix sigmaAAc;  // k x (m-k)
  Matrix sigmaAc;   // (m-k) x (m-k)

  Eigen::Index k() const { return sigmaA.rows(); }
  Eigen::Index unsampled() const { return sigmaAc.rows(); }
};

BlockPartition partition(const CovarianceModel& model, const SamplingSet& set);

/// Inverse of partition(): scatters the blocks back into an m x m matrix.
Matrix reassemble(const BlockPartition& bp);

/// Gathers rows/cols of `m` at the given index lists.
template <typename Derived>
Matrix gather(const Eigen::MatrixBase<Derived>& m, const std::vector<Eigen::Index>& rows,
              const std::vector<Eigen::Index>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

}  // namespace srdf
