#pragma once

#include "srdf/srdf_core.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace srdf {

inline constexpr double kAtomTol = 1e-8;
inline constexpr double kUsrdfTol = 1e-7;
inline constexpr int kDefaultGridRes = 33;
inline constexpr std::size_t kDefaultNodeCap = std::size_t{1} << 14;

struct ParamInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Compact family of source laws indexed by a parameter box, materialized
/// on a uniform tensor grid. Prior weights, when present, are normalized
/// masses of the grid nodes.
class ParamFamily {
 public:
  using CovarianceMap = std::function<Matrix(const Vector&)>;

  ParamFamily(std::vector<ParamInterval> box, CovarianceMap covAt, int gridRes,
              std::optional<Vector> priorDensity, std::size_t nodeCap = kDefaultNodeCap);

  Eigen::Index param_dim() const { return static_cast<Eigen::Index>(box_.size()); }
  Eigen::Index dim() const { return models_.front().dim(); }
  int grid_res() const { return gridRes_; }
  std::size_t node_count() const { return models_.size(); }
  const std::vector<ParamInterval>& box() const { return box_; }
  const Vector& node(std::size_t i) const { return nodes_[i]; }
  const CovarianceModel& model(std::size_t i) const { return models_[i]; }
  const std::optional<Vector>& prior() const { return prior_; }

  /// Set for the two-component equal-variance family whose correlation is
  /// the single parameter (sigma^2 stored here).
  std::optional<double> example3_variance;

 private:
  std::vector<ParamInterval> box_;
  int gridRes_;
  std::vector<Vector> nodes_;
  std::vector<CovarianceModel> models_;
  std::optional<Vector> prior_;
};

/// Sigma(tau) = sigma2 [[1, tau], [tau, 1]], tau in [rMin, rMax].
ParamFamily example3_family(double sigma2, double rMin, double rMax, int gridRes = kDefaultGridRes,
                            bool uniformPrior = true);
ParamFamily example3_family(double sigma2, double rMin, double rMax, int gridRes,
                            std::optional<Vector> priorDensity);

/// Sigma(tau) = base + sum_p tau_p coeffs[p], entry-wise affine in the parameters.
ParamFamily affine_family(Matrix base, std::vector<Matrix> coeffs, std::vector<ParamInterval> box,
                          int gridRes = kDefaultGridRes, std::optional<Vector> priorDensity = std::nullopt);

struct AmbiguityAtom {
  Matrix tau1;                       // shared sampled-block covariance
  std::vector<std::size_t> members;  // grid node indices, increasing
  std::optional<double> weight;      // prior mass
};

struct AmbiguityPartition {
  SamplingSet set;
  std::vector<AmbiguityAtom> atoms;

  bool all_singletons() const;
};

/// Groups grid nodes whose sampled blocks agree within atomTol (max norm).
AmbiguityPartition project_family(const ParamFamily& family, const SamplingSet& set, double atomTol = kAtomTol);

struct BayesAtomData {
  Matrix sigmaA;
  Matrix sigmaAAcBar;  // prior-averaged cross block over the atom
  Vector varAcBar;     // prior-averaged unsampled variances
  WeightMatrix gTau1;
  double deltaMinTau1 = 0.0;
  double deltaMaxTau1 = 0.0;
  Vector lambdas;
  double weight = 0.0;
};

BayesAtomData bayes_atom_data(const ParamFamily& family, const AmbiguityPartition& partition, std::size_t atom);

SrdfPoint rho_bayes(const BayesAtomData& atom, double delta);

/// Per-atom distortion at common rate r.
double bayes_distortion_rate(const BayesAtomData& atom, double rateBits);

struct BayesUsrdfResult {
  double rateBits = 0.0;
  double deltaMin = 0.0;
  double deltaMax = 0.0;
  bool trivial = false;
  std::vector<double> allocation;  // equalizing per-atom distortions
  std::vector<double> atomRates;   // rho_bayes at the allocation
  std::vector<double> weights;
};

struct UsrdfOptions {
  double atomTol = kAtomTol;
  int threads = 1;
};

BayesUsrdfResult bayes_usrdf(const ParamFamily& family, const SamplingSet& set, double delta,
                             const UsrdfOptions& options = {});

struct NonBayesUsrdfResult {
  double rateBits = 0.0;
  double deltaMin = 0.0;
  double deltaMax = 0.0;
  bool trivial = false;
  std::string method;  // "singleton-atoms" or "example3-closed-form"
  std::size_t worstAtom = 0;
};

/// Worst-case USRDf. Supported when every atom is a singleton, or for the
/// example3 family with one sampled component; otherwise UnsupportedFamily.
NonBayesUsrdfResult nonbayes_usrdf(const ParamFamily& family, const SamplingSet& set, double delta,
                                   const UsrdfOptions& options = {});

}  // namespace srdf
