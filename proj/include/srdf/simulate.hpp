#pragma once

#include "srdf/srdf_core.hpp"
#include "srdf/universal.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace srdf {

inline constexpr std::size_t kDefaultCodebookCap = std::size_t{1} << 18;

struct SimConfig {
  int n = 1;              // block length in time slots
  double rateBits = 1.0;  // target rate per slot
  std::size_t trainBlocks = 0;  // 0: max(20 J, 10000)
  std::size_t evalBlocks = 10000;
  std::uint64_t seed = 1;
  int lbgIters = 60;
  double lbgRelTol = 1e-6;
  double gridDelta = 0.05;
  std::size_t codebookCap = kDefaultCodebookCap;
  int threads = 1;
  // Universal runs: the encoder sees `estimationLength` slots per trial,
  // estimates the sampled covariance from all of them, then codes them in
  // blocks of n.
  std::size_t estimationLength = 2048;
  std::size_t trials = 200;
  bool traceBlocks = false;
};

/// J = 2^ceil(n R).
std::size_t codebook_size(const SimConfig& cfg);
std::size_t training_blocks(const SimConfig& cfg);
void validate_sim_config(const SimConfig& cfg);

/// Sample mean with a 95% normal-approximation half-width.
struct Estimate {
  double mean = 0.0;
  double halfWidth = 0.0;
};
Estimate estimate(const std::vector<double>& samples);

struct BlockTrace {
  double total = 0.0;
  double weighted = 0.0;
  double lift = 0.0;
};

struct SimReport {
  Estimate totalMSE;
  Estimate weightedMSE;
  Estimate liftMSE;
  /// Per-block total - weighted; its mean estimates the MMSE floor.
  Estimate decompositionGap;
  double deltaMin = 0.0;
  double codeRateBits = 0.0;  // log2(J) / n, plus index overhead for universal runs
  std::size_t codewordCount = 0;
  std::uint64_t seed = 0;
  std::vector<double> trainingDistortion;  // per-slot weighted distortion per LBG pass
  std::vector<BlockTrace> trace;

  // Universal runs only.
  std::optional<double> estimatorHitRate;  // fraction with ||ML estimate - theta1|| <= gridDelta
  std::optional<double> gridHitRate;       // fraction with ||grid estimate - theta1|| <= 2 gridDelta
  std::optional<double> overheadBits;      // log2 |grid| / estimationLength
  std::optional<std::size_t> gridSize;
  std::optional<double> badEventMass;
  std::optional<double> goodEventContribution;
  std::optional<double> badEventContribution;
  std::optional<double> badEventCap;  // sqrt(badEventMass * E[D^2])
};

/// `blocks` independent m x n blocks of i.i.d. N(0, sigma) columns. Block b
/// depends only on (seed, stream + b).
std::vector<Matrix> sample_gmms(const CovarianceModel& model, int n, std::size_t blocks, std::uint64_t seed,
                                std::uint64_t stream = 0);

/// Linear MMSE estimate of the unsampled components: C^T S^{-1} y.
class LiftMap {
 public:
  LiftMap(const Matrix& sigmaA, const Matrix& sigmaAAc);
  explicit LiftMap(const BlockPartition& bp) : LiftMap(bp.sigmaA, bp.sigmaAAc) {}

  /// Applies to a k-vector or slot-wise to a k x n block.
  Matrix operator()(const Matrix& yA) const;
  const Matrix& matrix() const { return map_; }

 private:
  Matrix map_;  // (m-k) x k
};

Vector mmse_lift(const BlockPartition& bp, const Vector& yA);

/// (1/n) sum_t x_t x_t^T over the columns of a k x n block.
Matrix ml_cov_estimate(const Matrix& xA);

/// Fixed-rate vector quantizer over k x n blocks under the slot-wise
/// weighted metric sum_t (x_t - y_t)^T G (x_t - y_t).
class BlockQuantizer {
 public:
  BlockQuantizer(const WeightMatrix& weights, int n, Matrix codebook);

  std::size_t size() const { return static_cast<std::size_t>(codebook_.cols()); }
  int block_length() const { return n_; }
  Eigen::Index k() const { return k_; }

  std::size_t encode(const Matrix& xA) const;
  /// k x n reconstruction of codeword j.
  Matrix decode(std::size_t j) const;
  /// Block-summed weighted distortion.
  double distortion(const Matrix& xA, std::size_t j) const;

  const Matrix& codebook() const { return codebook_; }

 private:
  Vector whiten(const Matrix& xA) const;

  Eigen::Index k_;
  int n_;
  Matrix whitenT_;   // L^T with G = L L^T
  Matrix codebook_;  // (k n) x J, original coordinates
  Matrix whitened_;  // (k n) x J
  Vector norms_;
  std::vector<double> sorted_;  // scalar fast path
  std::vector<std::size_t> order_;
};

struct LbgResult {
  BlockQuantizer quantizer;
  std::vector<double> history;  // per-slot training distortion per pass
};

/// Generalized Lloyd training on k x n blocks.
LbgResult train_lbg(const std::vector<Matrix>& blocks, const WeightMatrix& weights, std::size_t codewords,
                    int iters, double relTol, std::uint64_t seed, int threads);

/// Quantize the sampled block under G_A, then lift to the unsampled components.
SimReport two_step_code(const CovarianceModel& model, const SamplingSet& set, const SimConfig& cfg);

/// Greedy gridDelta-net over the atom representatives (Frobenius norm).
std::vector<std::size_t> select_grid_centers(const AmbiguityPartition& partition, double gridDelta);

struct UniversalEncoding {
  std::size_t atomIndex = 0;          // position in the grid
  std::vector<std::size_t> codewords;  // one per n-slot block
  Matrix estimate;                     // ML sampled covariance
};

/// Nearest grid representative to the ML estimate (ties to the lowest
/// index), then nearest codeword per block under that representative's
/// quantizer. xA holds a multiple of n slots.
UniversalEncoding universal_encode(const std::vector<Matrix>& grid, const std::vector<BlockQuantizer>& codebooks,
                                   const Matrix& xA);

SimReport universal_two_step(const ParamFamily& family, const SamplingSet& set, const SimConfig& cfg);

/// CSV "block,total_mse,weighted_mse,lift_mse".
void write_trace(std::ostream& out, const SimReport& report);

}  // namespace srdf
