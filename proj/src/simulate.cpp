#include "srdf/simulate.hpp"

#include "srdf/format.hpp"
#include "srdf/parallel.hpp"
#include "srdf/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>
#include <utility>

namespace srdf {

namespace {

constexpr std::uint64_t kTrainStream = std::uint64_t{1} << 40;
constexpr std::uint64_t kEvalStream = std::uint64_t{2} << 40;
constexpr std::uint64_t kTrialStream = std::uint64_t{3} << 40;
constexpr std::uint64_t kInitStream = std::uint64_t{4} << 40;
constexpr std::uint64_t kCenterStride = std::uint64_t{1} << 32;

Matrix sample_block(const Matrix& chol, int n, CounterRng& rng) {
  Matrix z(chol.rows(), n);
  for (int t = 0; t < n; ++t)
    for (Eigen::Index i = 0; i < chol.rows(); ++i) z(i, t) = rng.normal();
  return chol.triangularView<Eigen::Lower>() * z;
}

Matrix rows_of(const Matrix& x, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Eigen::Map<const Vector> flat(const Matrix& m) { return {m.data(), m.size()}; }

Matrix whitening_transpose(const WeightMatrix& weights) {
  Eigen::LLT<Matrix> llt(weights.g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::DimensionMismatch, "weight matrix is not positive definite");
  return llt.matrixL().transpose();
}

// Whitened (k n)-vectors of a set of k x n blocks, one per column.
Matrix whiten_blocks(const std::vector<Matrix>& blocks, const Matrix& whitenT) {
  const Eigen::Index dim = blocks.front().size();
  Matrix z(dim, static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix w = whitenT * blocks[b];
    z.col(static_cast<Eigen::Index>(b)) = flat(w);
  }
  return z;
}

struct Assignment {
  std::vector<std::size_t> index;
  std::vector<double> error;
};

// Nearest entry of an ascending list; among equal values the lowest original index wins.
std::pair<std::size_t, double> nearest_sorted(const std::vector<double>& sorted, const std::vector<std::size_t>& order,
                                              double x) {
  auto pos = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
  std::size_t best = sorted.size();
  double bestErr = std::numeric_limits<double>::infinity();
  std::size_t left = pos == 0 ? 0 : pos - 1;
  while (left > 0 && sorted[left - 1] == sorted[left]) --left;
  for (std::size_t c : {left, pos}) {
    if (c >= sorted.size()) continue;
    const double e = (x - sorted[c]) * (x - sorted[c]);
    if (e < bestErr || (e == bestErr && order[c] < order[best])) {
      bestErr = e;
      best = c;
    }
  }
  return {order[best], bestErr};
}

// Nearest codeword (Euclidean, whitened coordinates); ties go to the lowest index.
Assignment assign(const Matrix& z, const Matrix& codes, int threads) {
  const auto count = static_cast<std::size_t>(z.cols());
  Assignment out{std::vector<std::size_t>(count), std::vector<double>(count)};
  const Eigen::Index jCount = codes.cols();

  if (z.rows() == 1) {
    std::vector<std::size_t> order(static_cast<std::size_t>(jCount));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return codes(0, a) < codes(0, b); });
    std::vector<double> sorted(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = codes(0, static_cast<Eigen::Index>(order[i]));
    parallel_for(count, threads, [&](std::size_t t) {
      std::tie(out.index[t], out.error[t]) = nearest_sorted(sorted, order, z(0, static_cast<Eigen::Index>(t)));
    });
    return out;
  }

  const Vector norms = codes.colwise().squaredNorm().transpose();
  const std::size_t chunk = std::max<std::size_t>(1, std::min<std::size_t>(1024, (std::size_t{1} << 20) / jCount));
  const std::size_t chunks = (count + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const auto len = static_cast<Eigen::Index>(std::min(chunk, count - begin));
    const Matrix scores = codes.transpose() * z.middleCols(static_cast<Eigen::Index>(begin), len);
    for (Eigen::Index t = 0; t < len; ++t) {
      Eigen::Index best = 0;
      double bestScore = norms(0) - 2.0 * scores(0, t);
      for (Eigen::Index j = 1; j < jCount; ++j) {
        const double s = norms(j) - 2.0 * scores(j, t);
        if (s < bestScore) {
          bestScore = s;
          best = j;
        }
      }
      const auto slot = begin + static_cast<std::size_t>(t);
      out.index[slot] = static_cast<std::size_t>(best);
      out.error[slot] = (z.col(static_cast<Eigen::Index>(slot)) - codes.col(best)).squaredNorm();
    }
  });
  return out;
}

}  // namespace

std::size_t codebook_size(const SimConfig& cfg) {
  const double bits = std::ceil(static_cast<double>(cfg.n) * cfg.rateBits - 1e-9);
  if (bits >= 62) return std::numeric_limits<std::size_t>::max();
  return std::size_t{1} << static_cast<int>(std::max(0.0, bits));
}

std::size_t training_blocks(const SimConfig& cfg) {
  return cfg.trainBlocks > 0 ? cfg.trainBlocks : std::max<std::size_t>(20 * codebook_size(cfg), 10000);
}

void validate_sim_config(const SimConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSimConfig, msg); };
  if (cfg.n < 1) fail("block length n must be >= 1");
  if (!(cfg.rateBits >= 0.0) || !std::isfinite(cfg.rateBits)) fail("rate must be a finite nonnegative number");
  const std::size_t j = codebook_size(cfg);
  if (j > cfg.codebookCap) {
    std::ostringstream os;
    os << "codebook of size 2^ceil(" << cfg.n << " * " << cfg.rateBits << ") exceeds cap " << cfg.codebookCap;
    throw Error(ErrorCode::CodebookTooLarge, os.str());
  }
  if (training_blocks(cfg) < 20 * j) fail("training blocks must be at least 20x the codebook size");
  if (cfg.evalBlocks < 2) fail("need at least two evaluation blocks");
  if (cfg.lbgIters < 1) fail("lbgIters must be positive");
  if (!(cfg.gridDelta > 0.0)) fail("gridDelta must be positive");
}

Estimate estimate(const std::vector<double>& samples) {
  Estimate e;
  if (samples.empty()) return e;
  const auto n = static_cast<double>(samples.size());
  e.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() < 2) return e;
  double ss = 0.0;
  for (double s : samples) ss += (s - e.mean) * (s - e.mean);
  e.halfWidth = 1.96 * std::sqrt(ss / (n - 1.0) / n);
  return e;
}

std::vector<Matrix> sample_gmms(const CovarianceModel& model, int n, std::size_t blocks, std::uint64_t seed,
                                std::uint64_t stream) {
  std::vector<Matrix> out(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    CounterRng rng(seed, stream + b);
    out[b] = sample_block(model.cholesky(), n, rng);
  }
  return out;
}

LiftMap::LiftMap(const Matrix& sigmaA, const Matrix& sigmaAAc) {
  if (sigmaAAc.cols() == 0) {
    map_ = Matrix::Zero(0, sigmaA.rows());
    return;
  }
  const Eigen::LLT<Matrix> llt(sigmaA);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSigmaA, "sampled block is not positive definite");
  map_ = llt.solve(sigmaAAc).transpose();
}

Matrix LiftMap::operator()(const Matrix& yA) const {
  if (yA.rows() != map_.cols()) throw Error(ErrorCode::DimensionMismatch, "lift input has wrong number of rows");
  return map_ * yA;
}

Vector mmse_lift(const BlockPartition& bp, const Vector& yA) {
  if (yA.size() != bp.k()) throw Error(ErrorCode::DimensionMismatch, "mmse_lift: expected a k-vector");
  return LiftMap(bp)(yA);
}

Matrix ml_cov_estimate(const Matrix& xA) {
  if (xA.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "ml_cov_estimate needs at least one slot");
  Matrix s = xA * xA.transpose() / static_cast<double>(xA.cols());
  return 0.5 * (s + s.transpose());
}

BlockQuantizer::BlockQuantizer(const WeightMatrix& weights, int n, Matrix codebook)
    : k_(weights.g.rows()), n_(n), whitenT_(whitening_transpose(weights)), codebook_(std::move(codebook)) {
  if (codebook_.rows() != k_ * n_ || codebook_.cols() < 1)
    throw Error(ErrorCode::DimensionMismatch, "codebook rows must equal k * n");
  whitened_.resize(codebook_.rows(), codebook_.cols());
  for (Eigen::Index j = 0; j < codebook_.cols(); ++j) {
    const Eigen::Map<const Matrix> block(codebook_.col(j).data(), k_, n_);
    const Matrix w = whitenT_ * block;
    whitened_.col(j) = flat(w);
  }
  norms_ = whitened_.colwise().squaredNorm().transpose();
  if (whitened_.rows() == 1) {
    order_.resize(size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) {
      return whitened_(0, static_cast<Eigen::Index>(a)) < whitened_(0, static_cast<Eigen::Index>(b));
    });
    for (auto j : order_) sorted_.push_back(whitened_(0, static_cast<Eigen::Index>(j)));
  }
}

Vector BlockQuantizer::whiten(const Matrix& xA) const {
  if (xA.rows() != k_ || xA.cols() != n_) throw Error(ErrorCode::DimensionMismatch, "block shape must be k x n");
  const Matrix w = whitenT_ * xA;
  return flat(w);
}

std::size_t BlockQuantizer::encode(const Matrix& xA) const {
  const Vector z = whiten(xA);
  if (!sorted_.empty()) return nearest_sorted(sorted_, order_, z(0)).first;
  const Vector scores = norms_ - 2.0 * (whitened_.transpose() * z);
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < scores.size(); ++j)
    if (scores(j) < scores(best)) best = j;
  return static_cast<std::size_t>(best);
}

Matrix BlockQuantizer::decode(std::size_t j) const {
  return Eigen::Map<const Matrix>(codebook_.col(static_cast<Eigen::Index>(j)).data(), k_, n_);
}

double BlockQuantizer::distortion(const Matrix& xA, std::size_t j) const {
  return (whiten(xA) - whitened_.col(static_cast<Eigen::Index>(j))).squaredNorm();
}

LbgResult train_lbg(const std::vector<Matrix>& blocks, const WeightMatrix& weights, std::size_t codewords, int iters,
                    double relTol, std::uint64_t seed, int threads) {
  if (blocks.size() < codewords || codewords == 0)
    throw Error(ErrorCode::InvalidSimConfig, "need at least as many training blocks as codewords");
  const Eigen::Index k = weights.g.rows();
  const auto n = static_cast<int>(blocks.front().cols());
  const Matrix whitenT = whitening_transpose(weights);
  const Matrix z = whiten_blocks(blocks, whitenT);
  const auto count = static_cast<std::size_t>(z.cols());
  const auto jCount = static_cast<Eigen::Index>(codewords);

  // Distinct random training vectors as the initial codebook.
  CounterRng rng(seed, kInitStream);
  std::vector<std::size_t> pick(count);
  std::iota(pick.begin(), pick.end(), 0);
  Matrix codes(z.rows(), jCount);
  for (Eigen::Index j = 0; j < jCount; ++j) {
    const auto u = static_cast<std::size_t>(j) + rng.below(count - static_cast<std::size_t>(j));
    std::swap(pick[static_cast<std::size_t>(j)], pick[u]);
    codes.col(j) = z.col(static_cast<Eigen::Index>(pick[static_cast<std::size_t>(j)]));
  }

  std::vector<double> history;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < iters; ++it) {
    Assignment a = assign(z, codes, threads);
    const double dist = std::accumulate(a.error.begin(), a.error.end(), 0.0) / static_cast<double>(count) / n;
    if (dist > previous * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "LBG distortion rose from " << previous << " to " << dist << " at pass " << it;
      throw Error(ErrorCode::TrainingDiverged, os.str());
    }
    history.push_back(dist);
    if (previous - dist <= relTol * dist) break;
    previous = dist;

    Matrix sums = Matrix::Zero(z.rows(), jCount);
    std::vector<std::size_t> members(codewords, 0);
    for (std::size_t t = 0; t < count; ++t) {
      sums.col(static_cast<Eigen::Index>(a.index[t])) += z.col(static_cast<Eigen::Index>(t));
      ++members[a.index[t]];
    }
    for (Eigen::Index j = 0; j < jCount; ++j) {
      if (members[static_cast<std::size_t>(j)] > 0) {
        codes.col(j) = sums.col(j) / static_cast<double>(members[static_cast<std::size_t>(j)]);
      } else {
        // Empty cell: move the codeword onto the worst-served training vector.
        const auto worst = static_cast<std::size_t>(std::max_element(a.error.begin(), a.error.end()) - a.error.begin());
        codes.col(j) = z.col(static_cast<Eigen::Index>(worst));
        a.error[worst] = -1.0;
      }
    }
  }

  // Back to original coordinates slot by slot.
  Matrix codebook(z.rows(), jCount);
  const auto unwhiten = whitenT.triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < jCount; ++j) {
    const Eigen::Map<const Matrix> w(codes.col(j).data(), k, n);
    const Matrix x = unwhiten.solve(w);
    codebook.col(j) = flat(x);
  }
  return LbgResult{BlockQuantizer(weights, n, std::move(codebook)), std::move(history)};
}

namespace {

struct TrainedCode {
  WeightMatrix weights;
  LiftMap lift;
  LbgResult lbg;
};

TrainedCode train_code(const Matrix& sigmaA, const Matrix& crossBar, const SimConfig& cfg, std::uint64_t salt) {
  const CovarianceModel sampled = validate_covariance(sigmaA);
  const auto train = sample_gmms(sampled, cfg.n, training_blocks(cfg), cfg.seed, kTrainStream + salt * kCenterStride);
  WeightMatrix weights = weight_matrix(sigmaA, crossBar);
  LiftMap lift(sigmaA, crossBar);
  LbgResult lbg = train_lbg(train, weights, codebook_size(cfg), cfg.lbgIters, cfg.lbgRelTol,
                            cfg.seed ^ (salt * 0x9E3779B97F4A7C15ULL), cfg.threads);
  return TrainedCode{std::move(weights), std::move(lift), std::move(lbg)};
}

// Block-average errors of one reconstruction.
BlockTrace score_block(const Matrix& xA, const Matrix& xAc, const BlockQuantizer& vq, const LiftMap& lift,
                       std::size_t j) {
  const double slots = static_cast<double>(xA.cols());
  const Matrix yA = vq.decode(j);
  BlockTrace out;
  out.weighted = vq.distortion(xA, j) / slots;
  if (xAc.rows() > 0) {
    out.total = ((xA - yA).squaredNorm() + (xAc - lift(yA)).squaredNorm()) / slots;
    out.lift = (xAc - lift(xA)).squaredNorm() / slots;
  } else {
    out.total = (xA - yA).squaredNorm() / slots;
  }
  return out;
}

}  // namespace

SimReport two_step_code(const CovarianceModel& model, const SamplingSet& set, const SimConfig& cfg) {
  validate_sim_config(cfg);
  const BlockPartition bp = partition(model, set);
  const TrainedCode code = train_code(bp.sigmaA, bp.sigmaAAc, cfg, 0);
  const BlockQuantizer& vq = code.lbg.quantizer;

  std::vector<BlockTrace> blocks(cfg.evalBlocks);
  parallel_for(cfg.evalBlocks, cfg.threads, [&](std::size_t b) {
    CounterRng rng(cfg.seed, kEvalStream + b);
    const Matrix x = sample_block(model.cholesky(), cfg.n, rng);
    const Matrix xA = rows_of(x, set.indices());
    blocks[b] = score_block(xA, rows_of(x, set.complement()), vq, code.lift, vq.encode(xA));
  });

  std::vector<double> total, weighted, lift, gap;
  for (const auto& b : blocks) {
    total.push_back(b.total);
    weighted.push_back(b.weighted);
    lift.push_back(b.lift);
    gap.push_back(b.total - b.weighted);
  }
  SimReport report;
  report.totalMSE = estimate(total);
  report.weightedMSE = estimate(weighted);
  report.liftMSE = estimate(lift);
  report.decompositionGap = estimate(gap);
  report.deltaMin = min_distortion(bp);
  report.codewordCount = vq.size();
  report.codeRateBits = std::log2(static_cast<double>(vq.size())) / cfg.n;
  report.seed = cfg.seed;
  report.trainingDistortion = code.lbg.history;
  if (cfg.traceBlocks) report.trace = std::move(blocks);
  return report;
}

std::vector<std::size_t> select_grid_centers(const AmbiguityPartition& partition, double gridDelta) {
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < partition.atoms.size(); ++i) {
    bool covered = false;
    for (auto c : centers)
      covered = covered || (partition.atoms[i].tau1 - partition.atoms[c].tau1).norm() <= gridDelta;
    if (!covered) centers.push_back(i);
  }
  return centers;
}

UniversalEncoding universal_encode(const std::vector<Matrix>& grid, const std::vector<BlockQuantizer>& codebooks,
                                   const Matrix& xA) {
  if (grid.empty() || codebooks.size() != grid.size())
    throw Error(ErrorCode::EmptyGrid, "universal_encode needs one codebook per grid representative");
  UniversalEncoding out;
  out.estimate = ml_cov_estimate(xA);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = (grid[i] - out.estimate).norm();
    if (d < best) {
      best = d;
      out.atomIndex = i;
    }
  }
  const BlockQuantizer& vq = codebooks[out.atomIndex];
  const int n = vq.block_length();
  if (xA.cols() % n != 0) throw Error(ErrorCode::DimensionMismatch, "slot count must be a multiple of n");
  for (Eigen::Index t = 0; t < xA.cols(); t += n) out.codewords.push_back(vq.encode(xA.middleCols(t, n)));
  return out;
}

SimReport universal_two_step(const ParamFamily& family, const SamplingSet& set, const SimConfig& cfg) {
  validate_sim_config(cfg);
  if (!family.prior()) throw Error(ErrorCode::NoPrior, "universal simulation draws parameters from the prior");
  if (cfg.estimationLength % static_cast<std::size_t>(cfg.n) != 0 || cfg.estimationLength == 0)
    throw Error(ErrorCode::InvalidSimConfig, "estimationLength must be a positive multiple of n");
  if (cfg.trials < 2) throw Error(ErrorCode::InvalidSimConfig, "need at least two trials");

  const AmbiguityPartition part = project_family(family, set);
  const std::vector<std::size_t> centers = select_grid_centers(part, cfg.gridDelta);
  if (centers.empty()) throw Error(ErrorCode::EmptyGrid, "no grid representatives");

  std::vector<Matrix> grid;
  std::vector<TrainedCode> codes;
  std::vector<BlockQuantizer> books;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const BayesAtomData data = bayes_atom_data(family, part, centers[c]);
    grid.push_back(data.sigmaA);
    codes.push_back(train_code(data.sigmaA, data.sigmaAAcBar, cfg, c));
    books.push_back(codes.back().lbg.quantizer);
  }

  const Vector& prior = *family.prior();
  std::vector<double> cdf(static_cast<std::size_t>(prior.size()));
  std::partial_sum(prior.data(), prior.data() + prior.size(), cdf.begin());

  struct Trial {
    BlockTrace err;
    bool good = false;
    bool mlHit = false;
  };
  std::vector<Trial> trials(cfg.trials);
  const auto slots = static_cast<int>(cfg.estimationLength);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    CounterRng rng(cfg.seed, kTrialStream + t);
    const double u = rng.uniform() * cdf.back();
    const auto node = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), cdf.size() - 1);
    const CovarianceModel& member = family.model(node);
    const Matrix x = sample_block(member.cholesky(), slots, rng);
    const Matrix xA = rows_of(x, set.indices());
    const Matrix xAc = rows_of(x, set.complement());
    const UniversalEncoding enc = universal_encode(grid, books, xA);
    const TrainedCode& code = codes[enc.atomIndex];

    Trial out;
    for (std::size_t b = 0; b < enc.codewords.size(); ++b) {
      const auto col = static_cast<Eigen::Index>(b) * cfg.n;
      const BlockTrace e = score_block(xA.middleCols(col, cfg.n), xAc.middleCols(col, cfg.n), code.lbg.quantizer,
                                       code.lift, enc.codewords[b]);
      out.err.total += e.total;
      out.err.weighted += e.weighted;
      out.err.lift += e.lift;
    }
    const auto nb = static_cast<double>(enc.codewords.size());
    out.err.total /= nb;
    out.err.weighted /= nb;
    out.err.lift /= nb;
    const Matrix truth = gather(member.sigma(), set.indices(), set.indices());
    out.good = (grid[enc.atomIndex] - truth).norm() <= 2.0 * cfg.gridDelta;
    out.mlHit = (enc.estimate - truth).norm() <= cfg.gridDelta;
    trials[t] = out;
  });

  std::vector<double> total, weighted, lift, gap;
  double hits = 0.0, mlHits = 0.0, good = 0.0, bad = 0.0, second = 0.0;
  for (const auto& tr : trials) {
    total.push_back(tr.err.total);
    weighted.push_back(tr.err.weighted);
    lift.push_back(tr.err.lift);
    gap.push_back(tr.err.total - tr.err.weighted);
    hits += tr.good ? 1.0 : 0.0;
    mlHits += tr.mlHit ? 1.0 : 0.0;
    (tr.good ? good : bad) += tr.err.total;
    second += tr.err.total * tr.err.total;
  }
  const auto count = static_cast<double>(trials.size());

  SimReport report;
  report.totalMSE = estimate(total);
  report.weightedMSE = estimate(weighted);
  report.liftMSE = estimate(lift);
  report.decompositionGap = estimate(gap);
  double floor = 0.0;
  for (std::size_t a = 0; a < part.atoms.size(); ++a) {
    const BayesAtomData data = bayes_atom_data(family, part, a);
    floor += data.weight * data.deltaMinTau1;
  }
  report.deltaMin = floor;
  report.codewordCount = books.front().size();
  report.gridSize = grid.size();
  report.overheadBits = std::log2(static_cast<double>(grid.size())) / static_cast<double>(cfg.estimationLength);
  report.codeRateBits = std::log2(static_cast<double>(report.codewordCount)) / cfg.n + *report.overheadBits;
  report.seed = cfg.seed;
  report.trainingDistortion = codes.front().lbg.history;
  report.estimatorHitRate = mlHits / count;
  report.gridHitRate = hits / count;
  report.badEventMass = 1.0 - hits / count;
  report.goodEventContribution = good / count;
  report.badEventContribution = bad / count;
  report.badEventCap = std::sqrt(*report.badEventMass * second / count);
  if (cfg.traceBlocks)
    for (const auto& tr : trials) report.trace.push_back(tr.err);
  return report;
}

void write_trace(std::ostream& out, const SimReport& report) {
  out << "block,total_mse,weighted_mse,lift_mse\n";
  for (std::size_t b = 0; b < report.trace.size(); ++b) {
    const auto& t = report.trace[b];
    out << b << ',' << format_number(t.total) << ',' << format_number(t.weighted) << ',' << format_number(t.lift)
        << '\n';
  }
}

}  // namespace srdf
