#include "srdf/gmf.hpp"

#include "srdf/parallel.hpp"
#include "srdf/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace srdf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bilinear(const Matrix& v, double s, double u) {
  const Eigen::Index n = v.rows();
  const auto cell = [n](double x, Eigen::Index& i, double& t) {
    const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
    i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), n - 2);
    t = pos - static_cast<double>(i);
  };
  Eigen::Index i = 0, j = 0;
  double ts = 0.0, tu = 0.0;
  cell(s, i, ts);
  cell(u, j, tu);
  return (1 - ts) * ((1 - tu) * v(i, j) + tu * v(i, j + 1)) + ts * ((1 - tu) * v(i + 1, j) + tu * v(i + 1, j + 1));
}

std::vector<double> field_breaks(const FieldModel& field, const FieldSamplingSet& set) {
  std::vector<double> breaks = field.kinks();
  breaks.insert(breaks.end(), set.points().begin(), set.points().end());
  return breaks;
}

// Kernel columns K(q, i) = r(u_q, a_i) at the quadrature nodes.
Matrix kernel_columns(const FieldModel& field, const FieldSamplingSet& set, const QuadratureRule& rule) {
  Matrix kmat(static_cast<Eigen::Index>(rule.nodes.size()), set.size());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    for (Eigen::Index i = 0; i < set.size(); ++i) kmat(q, i) = field(rule.nodes[q], set.points()[i]);
  return kmat;
}

Matrix cross_integral(const FieldModel& field, const FieldSamplingSet& set, int panels) {
  const QuadratureRule rule = simpson_rule(field_breaks(field, set), panels);
  const Matrix kmat = kernel_columns(field, set, rule);
  const Eigen::Map<const Vector> w(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  Matrix inner = kmat.transpose() * w.asDiagonal() * kmat;
  return 0.5 * (inner + inner.transpose());
}

struct ResidualIntegral {
  double value = 0.0;
  double minIntegrand = 0.0;
};

ResidualIntegral residual_integral(const FieldModel& field, const FieldSamplingSet& set,
                                   const Eigen::LLT<Matrix>& gramLlt, int panels) {
  const QuadratureRule rule = simpson_rule(field_breaks(field, set), panels);
  const Matrix kmat = kernel_columns(field, set, rule);
  const Matrix half = gramLlt.matrixL().solve(kmat.transpose());  // L^{-1} k(u) per column
  ResidualIntegral out;
  out.minIntegrand = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    const double resid = field(u, u) - half.col(static_cast<Eigen::Index>(q)).squaredNorm();
    out.minIntegrand = std::min(out.minIntegrand, resid);
    out.value += rule.weights[q] * std::max(0.0, resid);
  }
  return out;
}

Eigen::LLT<Matrix> gram_factor(const FieldModel& field, const FieldSamplingSet& set) {
  Eigen::LLT<Matrix> llt(field_gram(field, set));
  return llt;
}

void check_resolution(double full, double half, double scale, const char* what) {
  if (std::abs(full - half) > kQuadRelTol * scale) {
    std::ostringstream os;
    os << what << ": half-resolution estimate differs by " << std::abs(full - half) << " (scale " << scale << ")";
    throw Error(ErrorCode::QuadratureUnderResolved, os.str());
  }
}

}  // namespace

FieldModel::FieldModel(Kernel kernel, int quadPanels) : kernel_(std::move(kernel)), quadPanels_(quadPanels) {
  if (quadPanels_ < 4 || quadPanels_ % 2 != 0)
    throw Error(ErrorCode::InvalidField, "quadrature panel count must be even and at least 4");
  std::visit(overloaded{
                 [](const GaussMarkovKernel& gm) {
                   if (!(gm.p > 0.0 && gm.p < 1.0))
                     throw Error(ErrorCode::InvalidField, "Gauss-Markov p must lie in (0, 1)");
                 },
                 [](const TabulatedKernel& tab) {
                   const Matrix& v = tab.values;
                   if (v.rows() < 2 || v.rows() != v.cols())
                     throw Error(ErrorCode::InvalidField, "tabulated kernel needs a square mesh with N >= 2");
                   if (!v.allFinite()) throw Error(ErrorCode::InvalidField, "tabulated kernel has non-finite values");
                   const double scale = v.cwiseAbs().maxCoeff();
                   if ((v - v.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
                     throw Error(ErrorCode::InvalidField, "tabulated kernel is not symmetric");
                 },
             },
             kernel_);
  if (auto* tab = std::get_if<TabulatedKernel>(&kernel_)) tab->values = 0.5 * (tab->values + tab->values.transpose());
}

double FieldModel::operator()(double s, double u) const {
  return std::visit(overloaded{
                        [&](const GaussMarkovKernel& gm) { return std::pow(gm.p, std::abs(s - u)); },
                        [&](const TabulatedKernel& tab) { return bilinear(tab.values, s, u); },
                    },
                    kernel_);
}

std::vector<double> FieldModel::kinks() const {
  std::vector<double> out;
  if (const auto* tab = std::get_if<TabulatedKernel>(&kernel_)) {
    const Eigen::Index n = tab->values.rows();
    for (Eigen::Index i = 1; i + 1 < n; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

FieldModel gauss_markov_field(double p, int quadPanels) { return FieldModel(GaussMarkovKernel{p}, quadPanels); }

FieldModel load_tabulated_field(const std::filesystem::path& path, int quadPanels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidField, "cannot open kernel mesh " + path.string());
  std::string line;
  long n = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    n = std::stol(line);
    break;
  }
  if (n < 2) throw Error(ErrorCode::InvalidField, "kernel mesh header must give N >= 2");
  Matrix values = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(fields >> i >> j >> v) || i < 0 || j < 0 || i >= n || j >= n)
      throw Error(ErrorCode::InvalidField, "malformed kernel mesh row: " + line);
    values(i, j) = v;
    ++rows;
  }
  if (rows != n * n || !values.allFinite())
    throw Error(ErrorCode::InvalidField, "kernel mesh must list all N^2 entries");
  return FieldModel(TabulatedKernel{std::move(values)}, quadPanels);
}

FieldSamplingSet::FieldSamplingSet(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::InvalidSamplingSet, "field sampling set is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i] >= 0.0 && points_[i] <= 1.0))
      throw Error(ErrorCode::IndexOutOfRange, "field sampling point outside [0, 1]");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw Error(ErrorCode::InvalidSamplingSet, "field sampling points must be strictly increasing");
  }
}

QuadratureRule simpson_rule(std::vector<double> breaks, int panels) {
  breaks.push_back(0.0);
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureRule rule;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    if (!(b > a)) continue;
    long count = static_cast<long>(std::ceil(panels * (b - a) / 2.0)) * 2;
    count = std::max(count, 2L);
    const double h = (b - a) / static_cast<double>(count);
    for (long i = 0; i <= count; ++i) {
      const double w = (i == 0 || i == count) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double u = i == count ? b : a + h * static_cast<double>(i);
      // Shared segment endpoints accumulate onto the previous node.
      if (i == 0 && !rule.nodes.empty() && rule.nodes.back() == u) {
        rule.weights.back() += w * h / 3.0;
        continue;
      }
      rule.nodes.push_back(u);
      rule.weights.push_back(w * h / 3.0);
    }
  }
  return rule;
}

Matrix field_gram(const FieldModel& field, const FieldSamplingSet& set) {
  const Eigen::Index k = set.size();
  Matrix gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = field(set.points()[i], set.points()[j]);
  return validate_covariance(gram).sigma();
}

WeightMatrix field_weight_matrix(const FieldModel& field, const FieldSamplingSet& set) {
  const Matrix inner = cross_integral(field, set, field.quad_panels());
  const Matrix coarse = cross_integral(field, set, field.quad_panels() / 2);
  const double scale = std::max(inner.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  check_resolution(0.0, (inner - coarse).cwiseAbs().maxCoeff(), scale, "field_weight_matrix");

  const Eigen::LLT<Matrix> llt = gram_factor(field, set);
  const Matrix left = llt.solve(inner);
  Matrix g = llt.solve(left.transpose());
  return WeightMatrix{0.5 * (g + g.transpose())};
}

double field_max_distortion(const FieldModel& field) {
  const QuadratureRule rule = simpson_rule(field.kinks(), field.quad_panels());
  double total = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) total += rule.weights[q] * field(rule.nodes[q], rule.nodes[q]);
  return total;
}

double field_min_distortion(const FieldModel& field, const FieldSamplingSet& set) {
  const Eigen::LLT<Matrix> llt = gram_factor(field, set);
  const ResidualIntegral full = residual_integral(field, set, llt, field.quad_panels());
  const ResidualIntegral coarse = residual_integral(field, set, llt, field.quad_panels() / 2);
  check_resolution(full.value, coarse.value, field_max_distortion(field), "field_min_distortion");
  return full.value;
}

SrdfPoint field_srdf(const FieldModel& field, const FieldSamplingSet& set, double delta) {
  const Matrix gram = field_gram(field, set);
  const Vector lambdas = congruent_eigenvalues(gram, field_weight_matrix(field, set));
  return srdf_from_spectrum(lambdas, field_min_distortion(field, set), field_max_distortion(field), delta);
}

double gauss_markov_gamma(double p, double a) {
  if (!(p > 0.0 && p < 1.0) || !(a > 0.0 && a <= 1.0))
    throw Error(ErrorCode::DomainError, "gauss_markov_gamma needs 0 < p < 1 and 0 < a <= 1");
  const double lnp = std::log(p);
  const double q = std::pow(p, 2.0 * a);
  return (q * (1.0 - 2.0 * a * lnp) - 1.0) / lnp / (1.0 - q);
}

double gauss_markov_min_distortion(double p, double a) {
  if (!(p > 0.0 && p < 1.0) || !(a >= 0.0 && a <= 1.0))
    throw Error(ErrorCode::DomainError, "gauss_markov_min_distortion needs 0 < p < 1 and 0 <= a <= 1");
  return 1.0 - (std::pow(p, 2.0 * a) + std::pow(p, 2.0 * (1.0 - a)) - 2.0) / (2.0 * std::log(p));
}

namespace {

constexpr double kInfeasiblePenalty = 1e3;

// Search-time panel count. Simpson is split at every sampling point and mesh
// line, so the integrands are smooth per piece and this is already accurate
// far below the placement tolerances; the winner is re-scored at full
// resolution.
constexpr int kSearchPanels = 256;

class PlacementSearch {
 public:
  PlacementSearch(const FieldModel& field, const PlacementObjective& objective, const PlacementOptions& options)
      : field_(field),
        objective_(objective),
        options_(options),
        deltaMax_(field_max_distortion(field)),
        panels_(std::min(field.quad_panels(), kSearchPanels)) {}

  double delta_min(const std::vector<double>& pts) const {
    const FieldSamplingSet set(pts);
    Eigen::LLT<Matrix> llt(field_gram_unchecked(set));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    return residual_integral(field_, set, llt, panels_).value;
  }

  double evaluate(const std::vector<double>& pts) const {
    const double floor = delta_min(pts);
    if (!std::isfinite(floor)) return std::numeric_limits<double>::infinity();
    if (objective_.kind == PlacementObjectiveKind::MinDelta) return floor;
    if (!(objective_.delta > floor)) return kInfeasiblePenalty + floor;
    if (objective_.delta >= deltaMax_) return 0.0;
    const FieldSamplingSet set(pts);
    const Matrix gram = field_gram_unchecked(set);
    const Matrix inner = cross_integral(field_, set, panels_);
    const Eigen::LLT<Matrix> llt(gram);
    const Matrix g = llt.solve(llt.solve(inner).transpose());
    const Vector lambdas = congruent_eigenvalues(gram, WeightMatrix{0.5 * (g + g.transpose())});
    return waterfill(lambdas, std::min(objective_.delta - floor, lambdas.sum())).rateBits;
  }

  // Coordinate descent from `start`; returns the final objective value.
  double descend(std::vector<double>& pts) const {
    const auto k = pts.size();
    const double sep = options_.sepTol;
    std::size_t first = 0, last = k;
    if (options_.pinEndpoints) {
      first = 1;
      last = k - 1;
    }
    double best = evaluate(pts);
    std::vector<double> reach(k, 1.0);
    for (int sweep = 0; sweep < options_.maxSweeps; ++sweep) {
      const double before = best;
      const std::vector<double> start = pts;
      for (std::size_t i = first; i < last; ++i) {
        const double lo = i == 0 ? 0.0 : pts[i - 1] + sep;
        const double hi = i + 1 == k ? 1.0 : pts[i + 1] - sep;
        if (!(hi > lo)) continue;
        const double x = pts[i];
        best = line_search(pts, i, std::max(lo, x - reach[i]), std::min(hi, x + reach[i]), best);
        reach[i] = std::max(4.0 * std::abs(pts[i] - x), 1e-6);
      }
      best = pattern_move(pts, start, best);
      if (before - best <= 1e-13 * std::max(1.0, std::abs(best))) break;
    }
    return best;
  }

 private:
  Matrix field_gram_unchecked(const FieldSamplingSet& set) const {
    const Eigen::Index k = set.size();
    Matrix gram(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = field_(set.points()[i], set.points()[j]);
    return gram;
  }

  // Line search along the displacement of the last sweep, which cuts the
  // zig-zag of plain coordinate descent along curved valleys.
  double pattern_move(std::vector<double>& pts, const std::vector<double>& start, double current) const {
    const auto k = pts.size();
    std::vector<double> dir(k);
    double norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      dir[i] = pts[i] - start[i];
      norm = std::max(norm, std::abs(dir[i]));
    }
    if (norm < 1e-12) return current;
    // Largest step keeping points inside [0,1], ordered and separated.
    double tmax = 4.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (dir[i] > 0) tmax = std::min(tmax, (1.0 - pts[i]) / dir[i]);
      if (dir[i] < 0) tmax = std::min(tmax, -pts[i] / dir[i]);
      if (i + 1 < k) {
        const double closing = dir[i] - dir[i + 1];
        if (closing > 0) tmax = std::min(tmax, (pts[i + 1] - pts[i] - options_.sepTol) / closing);
      }
    }
    if (!(tmax > 0)) return current;
    auto at = [&](double t) {
      std::vector<double> trial(k);
      for (std::size_t i = 0; i < k; ++i) trial[i] = pts[i] + t * dir[i];
      return trial;
    };
    const auto [t, f] = golden_section([&](double t) { return evaluate(at(t)); }, 0.0, tmax, 1e-9 / norm);
    if (f < current) {
      pts = at(t);
      return f;
    }
    return current;
  }

  template <typename F>
  static std::pair<double, double> golden_section(F&& f, double lo, double hi, double tol) {
    const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invPhi * (b - a), d = a + invPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invPhi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invPhi * (b - a);
        fd = f(d);
      }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
  }

  double line_search(std::vector<double>& pts, std::size_t i, double lo, double hi, double current) const {
    auto at = [&](double x) {
      std::vector<double> trial = pts;
      trial[i] = x;
      return evaluate(trial);
    };
    const auto [x, fx] = golden_section(at, lo, hi, 1e-9);
    double bestX = pts[i], bestF = current;
    for (const auto& [y, f] : {std::pair{x, fx}, std::pair{lo, at(lo)}, std::pair{hi, at(hi)}}) {
      if (f < bestF) {
        bestF = f;
        bestX = y;
      }
    }
    pts[i] = bestX;
    return bestF;
  }

  const FieldModel& field_;
  PlacementObjective objective_;
  PlacementOptions options_;
  double deltaMax_;
  int panels_;
};

std::vector<double> initial_points(Eigen::Index k, const PlacementOptions& options, int restart) {
  std::vector<double> pts(static_cast<std::size_t>(k));
  if (restart == 0) {
    for (Eigen::Index i = 0; i < k; ++i) {
      pts[i] = options.pinEndpoints ? static_cast<double>(i) / static_cast<double>(k - 1)
                                     : (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    }
    return pts;
  }
  CounterRng rng(options.seed, static_cast<std::uint64_t>(restart));
  // Sorted uniforms, re-drawn until separated.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (auto& x : pts) x = rng.uniform();
    std::sort(pts.begin(), pts.end());
    if (options.pinEndpoints) {
      pts.front() = 0.0;
      pts.back() = 1.0;
    }
    bool ok = true;
    for (std::size_t i = 1; i < pts.size(); ++i) ok = ok && pts[i] - pts[i - 1] >= options.sepTol * 10;
    if (ok) return pts;
  }
  return initial_points(k, options, 0);
}

}  // namespace

PlacementResult optimize_placement(const FieldModel& field, Eigen::Index k, const PlacementObjective& objective,
                                   const PlacementOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidSamplingSet, "placement needs k >= 1");
  if (options.pinEndpoints && k < 2) throw Error(ErrorCode::InvalidSamplingSet, "pinned endpoints need k >= 2");
  const PlacementSearch search(field, objective, options);
  const int restarts = std::max(1, options.restarts);

  std::vector<std::vector<double>> found(static_cast<std::size_t>(restarts));
  std::vector<double> values(static_cast<std::size_t>(restarts));
  parallel_for(found.size(), options.threads, [&](std::size_t r) {
    found[r] = initial_points(k, options, static_cast<int>(r));
    values[r] = search.descend(found[r]);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < values.size(); ++r)
    if (values[r] < values[best]) best = r;
  FieldSamplingSet set(found[best]);
  const double floor = field_min_distortion(field, set);
  double value = floor;
  if (objective.kind == PlacementObjectiveKind::MinRateAt)
    value = objective.delta > floor ? field_srdf(field, set, objective.delta).rateBits
                                    : std::numeric_limits<double>::infinity();
  return PlacementResult{std::move(set), value, floor};
}

}  // namespace srdf
