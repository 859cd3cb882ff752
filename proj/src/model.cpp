#include "srdf/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace srdf {

CovarianceModel validate_covariance(const Matrix& raw, std::vector<std::string> labels) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    std::ostringstream os;
    os << "covariance must be square and nonempty, got " << raw.rows() << "x" << raw.cols();
    throw Error(ErrorCode::NotSquare, os.str());
  }
  if (!raw.allFinite()) throw Error(ErrorCode::NotPositiveDefinite, "covariance has non-finite entries");

  const Eigen::Index m = raw.rows();
  const double scale = raw.cwiseAbs().maxCoeff();
  const double asym = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymTol * scale) {
    std::ostringstream os;
    os << "asymmetry " << asym << " exceeds " << kSymTol << " relative to max entry " << scale;
    throw Error(ErrorCode::NotSymmetric, os.str());
  }

  CovarianceModel model;
  model.sigma_ = 0.5 * (raw + raw.transpose());

  const double trace = model.sigma_.trace();
  const double pdTol = kPdTolScale * trace / static_cast<double>(m);
  Eigen::LLT<Matrix> llt(model.sigma_);
  if (llt.info() != Eigen::Success || !(trace > 0.0))
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  model.chol_ = llt.matrixL();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double pivot = model.chol_(i, i) * model.chol_(i, i);
    if (!(pivot > pdTol)) {
      std::ostringstream os;
      os << "Cholesky pivot " << i << " = " << pivot << " <= " << pdTol;
      throw Error(ErrorCode::NotPositiveDefinite, os.str());
    }
  }

  if (labels.empty()) {
    for (Eigen::Index i = 0; i < m; ++i) labels.push_back("X" + std::to_string(i + 1));
  } else if (static_cast<Eigen::Index>(labels.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match covariance dimension");
  }
  model.labels_ = std::move(labels);
  return model;
}

SamplingSet::SamplingSet(std::vector<Eigen::Index> indices, Eigen::Index dim)
    : indices_(std::move(indices)), dim_(dim) {
  if (indices_.empty() || static_cast<Eigen::Index>(indices_.size()) > dim_)
    throw Error(ErrorCode::InvalidSamplingSet, "sampling set must hold between 1 and m indices");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= dim_) {
      std::ostringstream os;
      os << "index " << indices_[i] + 1 << " outside 1.." << dim_;
      throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw Error(ErrorCode::InvalidSamplingSet, "sampling indices must be strictly increasing");
  }
  for (Eigen::Index j = 0, a = 0; j < dim_; ++j) {
    if (a < size() && indices_[a] == j) {
      ++a;
    } else {
      complement_.push_back(j);
    }
  }
}

SamplingSet SamplingSet::from_one_based(const std::vector<long>& indices, Eigen::Index dim) {
  std::vector<Eigen::Index> zero;
  zero.reserve(indices.size());
  for (long i : indices) zero.push_back(static_cast<Eigen::Index>(i) - 1);
  return SamplingSet(std::move(zero), dim);
}

SamplingSet SamplingSet::all(Eigen::Index dim) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) idx[i] = i;
  return SamplingSet(std::move(idx), dim);
}

std::vector<long> SamplingSet::one_based() const {
  std::vector<long> out;
  for (auto i : indices_) out.push_back(static_cast<long>(i) + 1);
  return out;
}

BlockPartition partition(const CovarianceModel& model, const SamplingSet& set) {
  if (set.dim() != model.dim())
    throw Error(ErrorCode::IndexOutOfRange, "sampling set built for a different dimension");
  const auto& a = set.indices();
  const auto& ac = set.complement();
  return BlockPartition{set, gather(model.sigma(), a, a), gather(model.sigma(), a, ac),
                        gather(model.sigma(), ac, ac)};
}

Matrix reassemble(const BlockPartition& bp) {
  const auto& a = bp.set.indices();
  const auto& ac = bp.set.complement();
  Matrix out(bp.set.dim(), bp.set.dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out(a[i], a[j]) = bp.sigmaA(i, j);
    for (std::size_t j = 0; j < ac.size(); ++j) {
      out(a[i], ac[j]) = bp.sigmaAAc(i, j);
      out(ac[j], a[i]) = bp.sigmaAAc(i, j);
    }
  }
  for (std::size_t i = 0; i < ac.size(); ++i)
    for (std::size_t j = 0; j < ac.size(); ++j) out(ac[i], ac[j]) = bp.sigmaAc(i, j);
  return out;
}

}  // namespace srdf
