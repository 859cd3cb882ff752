#pragma once

#include "srdf/srdf_core.hpp"

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

namespace srdf {

inline constexpr int kDefaultQuadPanels = 2048;
inline constexpr double kQuadRelTol = 1e-7;
inline constexpr double kDefaultSepTol = 1e-6;

/// Stationary Gauss-Markov kernel r(s, u) = p^|s - u|.
struct GaussMarkovKernel {
  double p = 0.5;
};

/// r(s, u) sampled on a uniform n x n mesh over [0,1]^2, bilinearly
/// interpolated. values(i, j) = r(i / (n-1), j / (n-1)).
struct TabulatedKernel {
  Matrix values;
};

/// Zero-mean Gaussian process on I = [0, 1].
class FieldModel {
 public:
  using Kernel = std::variant<GaussMarkovKernel, TabulatedKernel>;

  FieldModel(Kernel kernel, int quadPanels = kDefaultQuadPanels);

  double operator()(double s, double u) const;
  const Kernel& kernel() const { return kernel_; }
  int quad_panels() const { return quadPanels_; }
  /// Points in (0, 1) where r(u, .) may fail to be smooth in u, besides the
  /// sampling points themselves.
  std::vector<double> kinks() const;

 private:
  Kernel kernel_;
  int quadPanels_;
};

FieldModel gauss_markov_field(double p, int quadPanels = kDefaultQuadPanels);

/// Reads a mesh CSV: first line N, then N^2 lines "i,j,value".
FieldModel load_tabulated_field(const std::filesystem::path& path, int quadPanels = kDefaultQuadPanels);

class FieldSamplingSet {
 public:
  explicit FieldSamplingSet(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }

 private:
  std::vector<double> points_;
};

/// Composite Simpson nodes and weights over [0,1], split at `breaks`.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule simpson_rule(std::vector<double> breaks, int panels);

Matrix field_gram(const FieldModel& field, const FieldSamplingSet& set);

/// G_{A,I} = S^{-1} (int_I k(u) k(u)^T du) S^{-1}, with k(u) = [r(u, a_i)].
WeightMatrix field_weight_matrix(const FieldModel& field, const FieldSamplingSet& set);

/// int_I (r(u,u) - k(u)^T S^{-1} k(u)) du, integrand clamped at zero.
double field_min_distortion(const FieldModel& field, const FieldSamplingSet& set);
double field_max_distortion(const FieldModel& field);

SrdfPoint field_srdf(const FieldModel& field, const FieldSamplingSet& set, double delta);

/// Segment gain for the Gauss-Markov kernel, natural logarithm:
/// ((p^{2a}(1 - 2a ln p) - 1) / ln p) / (1 - p^{2a}), for 0 < a <= 1.
double gauss_markov_gamma(double p, double a);

/// Single-point floor from the antiderivative:
/// 1 - (p^{2a} + p^{2(1-a)} - 2) / (2 ln p).
double gauss_markov_min_distortion(double p, double a);

enum class PlacementObjectiveKind { MinDelta, MinRateAt };

struct PlacementObjective {
  PlacementObjectiveKind kind = PlacementObjectiveKind::MinDelta;
  double delta = 0.0;  // used by MinRateAt
};

struct PlacementOptions {
  int restarts = 16;
  bool pinEndpoints = false;
  std::uint64_t seed = 0;
  int threads = 1;
  double sepTol = kDefaultSepTol;
  int maxSweeps = 400;
};

struct PlacementResult {
  FieldSamplingSet set;
  double objective = 0.0;  // Delta_min or rate in bits
  double deltaMin = 0.0;
};

/// Multi-start coordinate descent with golden-section line searches.
PlacementResult optimize_placement(const FieldModel& field, Eigen::Index k, const PlacementObjective& objective,
                                   const PlacementOptions& options = {});

}  // namespace srdf
