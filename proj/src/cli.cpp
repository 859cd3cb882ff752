#include "srdf/cli.hpp"

#include "srdf/format.hpp"
#include "srdf/gmf.hpp"
#include "srdf/setopt.hpp"
#include "srdf/simulate.hpp"
#include "srdf/srdf_core.hpp"
#include "srdf/universal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace srdf::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigParse, msg); }

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(format_number(x));
}

json num_array(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

json num_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(num_array(m.row(i).transpose()));
  return out;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(path + " has the wrong type");
  }
}

template <typename T>
T scalar_or(const YAML::Node& parent, const std::string& key, T fallback, const std::string& path) {
  const YAML::Node node = parent[key];
  return node ? scalar<T>(node, path + "." + key) : fallback;
}

YAML::Node child(const YAML::Node& parent, const std::string& key, const std::string& path) {
  const YAML::Node node = parent[key];
  if (!node) fail(path + " required");
  return node;
}

fs::path resolve(const RunConfig& cfg, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() ? p : cfg.baseDir / p;
}

Matrix read_matrix_csv(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) fail(what + ": cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(what + ": bad number '" + cell + "' in " + path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(what + ": empty matrix file " + path.string());
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) fail(what + ": ragged rows in " + path.string());
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

// Inline row lists, or {csv: file}.
Matrix read_matrix(const RunConfig& cfg, const YAML::Node& node, const std::string& path) {
  if (node.IsMap()) return read_matrix_csv(resolve(cfg, scalar<std::string>(child(node, "csv", path), path + ".csv")), path);
  if (!node.IsSequence() || node.size() == 0) fail(path + " must be a list of rows");
  const std::size_t cols = node[0].IsSequence() ? node[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(node.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].IsSequence() || node[i].size() != cols) fail(path + " rows must be lists of equal length");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          scalar<double>(node[i][j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return m;
}

Vector read_vector(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) fail(path + " must be a list");
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = scalar<double>(node[i], path + "[" + std::to_string(i) + "]");
  return v;
}

CovarianceModel read_model(const RunConfig& cfg) {
  const YAML::Node model = cfg.doc["model"];
  if (!model || !model.IsMap()) fail("model.sigma required");
  std::vector<std::string> labels;
  if (model["labels"]) labels = scalar<std::vector<std::string>>(model["labels"], "model.labels");
  if (model["sigma"]) return validate_covariance(read_matrix(cfg, model["sigma"], "model.sigma"), labels);
  if (model["sigmas"] && model["correlations"]) {
    const Vector sigmas = read_vector(model["sigmas"], "model.sigmas");
    const Matrix corr = read_matrix(cfg, model["correlations"], "model.correlations");
    if (corr.rows() != sigmas.size() || corr.cols() != sigmas.size())
      fail("model.correlations must be m x m for m = len(model.sigmas)");
    return validate_covariance(correlation_covariance(sigmas, corr), labels);
  }
  fail("model.sigma required");
}

SamplingSet read_sampling(const RunConfig& cfg, Eigen::Index dim) {
  const YAML::Node node = child(cfg.doc, "sampling", "sampling");
  return SamplingSet::from_one_based(scalar<std::vector<long>>(node, "sampling"), dim);
}

json sampling_json(const SamplingSet& set) {
  json out = json::array();
  for (auto i : set.one_based()) out.push_back(i);
  return out;
}

// Inclusive linear grid; missing ends default to (lo + (hi - lo)/count, hi].
std::vector<double> read_grid(const RunConfig& cfg, const std::string& key, double lo, double hi, int count) {
  const YAML::Node node = cfg.doc[key];
  if (node && node.IsSequence()) {
    const Vector v = read_vector(node, key);
    return {v.data(), v.data() + v.size()};
  }
  if (node && !node.IsMap()) fail(key + " must be a list or {from, to, count}");
  count = node ? scalar_or<int>(node, "count", count, key) : count;
  if (count < 1) fail(key + ".count must be positive");
  const double from = node ? scalar_or<double>(node, "from", lo + (hi - lo) / count, key) : lo + (hi - lo) / count;
  const double to = node ? scalar_or<double>(node, "to", hi, key) : hi;
  std::vector<double> grid;
  for (int i = 0; i < count; ++i)
    grid.push_back(count == 1 ? to : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1));
  return grid;
}

FieldModel read_field(const RunConfig& cfg) {
  const YAML::Node node = child(cfg.doc, "field", "field");
  const auto kernel = scalar<std::string>(child(node, "kernel", "field.kernel"), "field.kernel");
  const int panels = scalar_or<int>(node, "quad_panels", kDefaultQuadPanels, "field");
  if (kernel == "gauss-markov") return gauss_markov_field(scalar<double>(child(node, "p", "field.p"), "field.p"), panels);
  if (kernel == "tabulated") {
    const auto mesh = scalar<std::string>(child(node, "mesh", "field.mesh"), "field.mesh");
    return load_tabulated_field(resolve(cfg, mesh), panels);
  }
  fail("field.kernel must be gauss-markov or tabulated");
}

std::vector<ParamInterval> read_box(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() == 0) fail(path + " must be a nonempty list of [lo, hi]");
  std::vector<ParamInterval> box;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const Vector iv = read_vector(node[i], path + "[" + std::to_string(i) + "]");
    if (iv.size() != 2) fail(path + " intervals must have two ends");
    box.push_back({iv(0), iv(1)});
  }
  return box;
}

std::optional<Vector> read_prior(const RunConfig& cfg, const YAML::Node& family, std::size_t nodes) {
  const YAML::Node node = family["prior"];
  if (!node) return Vector::Ones(static_cast<Eigen::Index>(nodes));
  if (node.IsScalar()) {
    const auto kind = scalar<std::string>(node, "family.prior");
    if (kind == "uniform") return Vector::Ones(static_cast<Eigen::Index>(nodes));
    if (kind == "none") return std::nullopt;
    fail("family.prior must be uniform, none, or {csv: file}");
  }
  const Matrix values = read_matrix(cfg, node, "family.prior");
  if (values.size() != static_cast<Eigen::Index>(nodes))
    fail("family.prior needs one density value per grid node (" + std::to_string(nodes) + ")");
  return Eigen::Map<const Vector>(values.data(), values.size());
}

ParamFamily read_family(const RunConfig& cfg) {
  const YAML::Node node = child(cfg.doc, "family", "family");
  const auto kind = scalar<std::string>(child(node, "template", "family.template"), "family.template");
  const int gridRes = scalar_or<int>(node, "grid_res", kDefaultGridRes, "family");
  if (kind == "example3") {
    const double sigma2 = scalar_or<double>(node, "sigma2", 1.0, "family");
    const Vector r = read_vector(child(node, "r", "family.r"), "family.r");
    if (r.size() != 2) fail("family.r must be [lo, hi]");
    return example3_family(sigma2, r(0), r(1), gridRes, read_prior(cfg, node, static_cast<std::size_t>(gridRes)));
  }
  if (kind == "general-corr") {
    const Matrix base = read_matrix(cfg, child(node, "base", "family.base"), "family.base");
    const YAML::Node coeffNode = child(node, "coeffs", "family.coeffs");
    std::vector<Matrix> coeffs;
    for (std::size_t i = 0; i < coeffNode.size(); ++i)
      coeffs.push_back(read_matrix(cfg, coeffNode[i], "family.coeffs[" + std::to_string(i) + "]"));
    auto box = read_box(child(node, "box", "family.box"), "family.box");
    const double nodes = std::pow(static_cast<double>(gridRes), static_cast<double>(box.size()));
    const auto prior =
        nodes <= static_cast<double>(kDefaultNodeCap) ? read_prior(cfg, node, static_cast<std::size_t>(nodes)) : std::nullopt;
    return affine_family(base, std::move(coeffs), std::move(box), gridRes, prior);
  }
  fail("family.template must be example3 or general-corr");
}

SimConfig read_sim(const RunConfig& cfg) {
  SimConfig sim;
  const YAML::Node node = cfg.doc["sim"];
  if (node && !node.IsMap()) fail("sim must be a block");
  if (node) {
    sim.n = scalar_or<int>(node, "n", sim.n, "sim");
    sim.rateBits = scalar_or<double>(node, "rate_bits", sim.rateBits, "sim");
    sim.trainBlocks = scalar_or<std::size_t>(node, "train_blocks", sim.trainBlocks, "sim");
    sim.evalBlocks = scalar_or<std::size_t>(node, "eval_blocks", sim.evalBlocks, "sim");
    sim.lbgIters = scalar_or<int>(node, "lbg_iters", sim.lbgIters, "sim");
    sim.lbgRelTol = scalar_or<double>(node, "lbg_rel_tol", sim.lbgRelTol, "sim");
    sim.gridDelta = scalar_or<double>(node, "grid_delta", sim.gridDelta, "sim");
    sim.codebookCap = scalar_or<std::size_t>(node, "codebook_cap", sim.codebookCap, "sim");
    sim.estimationLength = scalar_or<std::size_t>(node, "estimation_length", sim.estimationLength, "sim");
    sim.trials = scalar_or<std::size_t>(node, "trials", sim.trials, "sim");
    sim.traceBlocks = scalar_or<bool>(node, "trace", false, "sim");
  }
  sim.seed = cfg.seed;
  sim.threads = cfg.threads;
  return sim;
}

json estimate_json(const Estimate& e) { return {{"mean", num(e.mean)}, {"half_width", num(e.halfWidth)}}; }

json report_json(const SimReport& r) {
  json out = {
      {"total_mse", estimate_json(r.totalMSE)},
      {"weighted_mse", estimate_json(r.weightedMSE)},
      {"lift_mse", estimate_json(r.liftMSE)},
      {"decomposition_gap", estimate_json(r.decompositionGap)},
      {"code_rate_bits", num(r.codeRateBits)},
      {"codeword_count", r.codewordCount},
      {"training_distortion", num_array(Eigen::Map<const Vector>(r.trainingDistortion.data(),
                                                                  static_cast<Eigen::Index>(r.trainingDistortion.size())))},
  };
  if (r.estimatorHitRate) {
    out["estimator_hit_rate"] = num(*r.estimatorHitRate);
    out["grid_hit_rate"] = num(*r.gridHitRate);
    out["overhead_bits"] = num(*r.overheadBits);
    out["grid_size"] = *r.gridSize;
    out["bad_event_mass"] = num(*r.badEventMass);
    out["good_event_contribution"] = num(*r.goodEventContribution);
    out["bad_event_contribution"] = num(*r.badEventContribution);
    out["bad_event_cap"] = num(*r.badEventCap);
  }
  return out;
}

class Emitter {
 public:
  Emitter(const RunConfig& cfg, RunResult& result) : cfg_(cfg), result_(result) {}

  void curve(const std::string& file, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) {
    if (cfg_.format == "json") {
      json data = json::array();
      for (const auto& row : rows) {
        json r = json::array();
        for (double x : row) r.push_back(num(x));
        data.push_back(std::move(r));
      }
      result_.summary["curve"] = {{"columns", columns}, {"data", std::move(data)}};
      return;
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
      out << '\n';
    }
    text(file, out.str());
    result_.summary["curve"] = {{"columns", columns}, {"file", file}, {"rows", rows.size()}};
  }

  void text(const std::string& file, const std::string& body) {
    const fs::path path = cfg_.outDir / file;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write " + path.string());
    out << body;
    result_.artifacts.push_back(path);
  }

 private:
  const RunConfig& cfg_;
  RunResult& result_;
};

void point_rows(std::vector<std::vector<double>>& rows, double x, double y) { rows.push_back({x, y}); }

void task_srdf(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const CovarianceModel model = read_model(cfg);
  const SamplingSet set = read_sampling(cfg, model.dim());
  const BlockPartition bp = partition(model, set);
  const double lo = min_distortion(bp), hi = max_distortion(model);
  std::vector<std::vector<double>> rows;
  for (double d : read_grid(cfg, "delta_grid", lo, hi, 50)) point_rows(rows, d, srdf(model, set, d).rateBits);
  res.summary["sampling"] = sampling_json(set);
  res.summary["delta_min"] = num(lo);
  res.summary["delta_max"] = num(hi);
  res.summary["eigenvalues"] = num_array(srdf_eigenvalues(bp));
  res.summary["weight_matrix"] = num_matrix(weight_matrix(bp).g);
  emit.curve("srdf.csv", {"delta_variance", "rate_bits"}, rows);
}

void task_distrate(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const CovarianceModel model = read_model(cfg);
  const SamplingSet set = read_sampling(cfg, model.dim());
  const BlockPartition bp = partition(model, set);
  const Vector lambdas = srdf_eigenvalues(bp);
  const double lo = min_distortion(bp);
  std::vector<std::vector<double>> rows;
  for (double r : read_grid(cfg, "rate_grid", -0.25, 8.0, 33)) {
    if (r < 0) fail("rate_grid values must be nonnegative");
    point_rows(rows, r, distortion_rate(lambdas, lo, r));
  }
  res.summary["sampling"] = sampling_json(set);
  res.summary["delta_min"] = num(lo);
  res.summary["delta_max"] = num(max_distortion(model));
  res.summary["eigenvalues"] = num_array(lambdas);
  emit.curve("distrate.csv", {"rate_bits", "delta_variance"}, rows);
}

FieldSamplingSet read_points(const RunConfig& cfg) {
  const Vector pts = read_vector(child(cfg.doc, "points", "points"), "points");
  return FieldSamplingSet({pts.data(), pts.data() + pts.size()});
}

void task_gmf_srdf(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const FieldModel field = read_field(cfg);
  const FieldSamplingSet set = read_points(cfg);
  const double lo = field_min_distortion(field, set), hi = field_max_distortion(field);
  const WeightMatrix g = field_weight_matrix(field, set);
  std::vector<std::vector<double>> rows;
  for (double d : read_grid(cfg, "delta_grid", lo, hi, 50)) point_rows(rows, d, field_srdf(field, set, d).rateBits);
  res.summary["points"] = set.points();
  res.summary["delta_min"] = num(lo);
  res.summary["delta_max"] = num(hi);
  res.summary["eigenvalues"] = num_array(congruent_eigenvalues(field_gram(field, set), g));
  res.summary["weight_matrix"] = num_matrix(g.g);
  emit.curve("gmf_srdf.csv", {"delta_variance", "rate_bits"}, rows);
}

void task_optimize_set(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const CovarianceModel model = read_model(cfg);
  const auto k = scalar<long>(child(cfg.doc, "k", "k"), "k");
  SetObjective objective;
  if (const YAML::Node node = cfg.doc["objective"]) {
    const auto kind = scalar_or<std::string>(node, "kind", "min-delta-min", "objective");
    if (kind == "min-rate-at") {
      objective.kind = SetObjectiveKind::MinRateAt;
      objective.delta = scalar<double>(child(node, "delta", "objective.delta"), "objective.delta");
    } else if (kind != "min-delta-min") {
      fail("objective.kind must be min-delta-min or min-rate-at");
    }
  }
  if (k < 1 || k > model.dim()) fail("k must lie in [1, m]");
  const SetSearchResult found = best_fixed_set(model, k, objective, cfg.threads);
  const BlockPartition bp = partition(model, found.bestSet);
  res.summary["best_set"] = sampling_json(found.bestSet);
  res.summary["objective"] = num(found.objective);
  res.summary["subset_count"] = found.table.size();
  res.summary["delta_min"] = num(min_distortion(bp));
  res.summary["delta_max"] = num(max_distortion(model));
  res.summary["eigenvalues"] = num_array(srdf_eigenvalues(bp));
  if (cfg.format == "json") {
    json table = json::array();
    for (const auto& row : found.table)
      table.push_back({sampling_json(row.set), num(row.deltaMin), num(row.rateBits)});
    res.summary["curve"] = {{"columns", {"subset", "delta_min_variance", "rate_bits"}}, {"data", table}};
    return;
  }
  std::ostringstream out;
  write_subset_table(out, found);
  emit.text("subsets.csv", out.str());
  res.summary["curve"] = {{"columns", {"subset", "delta_min_variance", "rate_bits"}},
                          {"file", "subsets.csv"},
                          {"rows", found.table.size()}};
}

void task_place(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const FieldModel field = read_field(cfg);
  const auto k = scalar<long>(child(cfg.doc, "k", "k"), "k");
  if (k < 1) fail("k must be positive");
  PlacementObjective objective;
  if (const YAML::Node node = cfg.doc["objective"]) {
    const auto kind = scalar_or<std::string>(node, "kind", "min-delta", "objective");
    if (kind == "min-rate-at") {
      objective.kind = PlacementObjectiveKind::MinRateAt;
      objective.delta = scalar<double>(child(node, "delta", "objective.delta"), "objective.delta");
    } else if (kind != "min-delta") {
      fail("objective.kind must be min-delta or min-rate-at");
    }
  }
  PlacementOptions options;
  options.restarts = scalar_or<int>(cfg.doc, "restarts", options.restarts, "");
  options.pinEndpoints = scalar_or<bool>(cfg.doc, "pin_endpoints", false, "");
  options.sepTol = scalar_or<double>(cfg.doc, "sep_tol", options.sepTol, "");
  options.seed = cfg.seed;
  options.threads = cfg.threads;
  const PlacementResult found = optimize_placement(field, k, objective, options);
  const WeightMatrix g = field_weight_matrix(field, found.set);
  res.summary["points"] = found.set.points();
  res.summary["objective"] = num(found.objective);
  res.summary["delta_min"] = num(found.deltaMin);
  res.summary["delta_max"] = num(field_max_distortion(field));
  res.summary["eigenvalues"] = num_array(congruent_eigenvalues(field_gram(field, found.set), g));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < found.set.points().size(); ++i)
    rows.push_back({static_cast<double>(i + 1), found.set.points()[i]});
  emit.curve("placement.csv", {"point", "location"}, rows);
}

json atom_eigenvalues(const ParamFamily& family, const AmbiguityPartition& part) {
  json out = json::array();
  for (std::size_t a = 0; a < part.atoms.size(); ++a) {
    if (family.prior()) {
      out.push_back(num_array(bayes_atom_data(family, part, a).lambdas));
    } else {
      const auto& member = family.model(part.atoms[a].members.front());
      out.push_back(num_array(srdf_eigenvalues(partition(member, part.set))));
    }
  }
  return out;
}

void task_usrdf(const RunConfig& cfg, RunResult& res, Emitter& emit, bool bayes) {
  const ParamFamily family = read_family(cfg);
  const SamplingSet set = read_sampling(cfg, family.dim());
  const double probe = std::numeric_limits<double>::max();
  const auto rate = [&](double d) {
    return bayes ? bayes_usrdf(family, set, d, {kAtomTol, cfg.threads}).rateBits
                 : nonbayes_usrdf(family, set, d, {kAtomTol, cfg.threads}).rateBits;
  };
  double lo = 0.0, hi = 0.0;
  if (bayes) {
    const auto r = bayes_usrdf(family, set, probe, {kAtomTol, cfg.threads});
    lo = r.deltaMin;
    hi = r.deltaMax;
  } else {
    const auto r = nonbayes_usrdf(family, set, probe, {kAtomTol, cfg.threads});
    lo = r.deltaMin;
    hi = r.deltaMax;
    res.summary["method"] = r.method;
  }
  std::vector<std::vector<double>> rows;
  for (double d : read_grid(cfg, "delta_grid", lo, hi, 50)) point_rows(rows, d, rate(d));
  const AmbiguityPartition part = project_family(family, set);
  res.summary["sampling"] = sampling_json(set);
  res.summary["atom_count"] = part.atoms.size();
  res.summary["delta_min"] = num(lo);
  res.summary["delta_max"] = num(hi);
  res.summary["eigenvalues"] = atom_eigenvalues(family, part);
  emit.curve(bayes ? "usrdf_bayes.csv" : "usrdf_nonbayes.csv", {"delta_variance", "rate_bits"}, rows);
}

void task_simulate(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const CovarianceModel model = read_model(cfg);
  const SamplingSet set = read_sampling(cfg, model.dim());
  const SimConfig sim = read_sim(cfg);
  const SimReport report = two_step_code(model, set, sim);
  const BlockPartition bp = partition(model, set);
  res.summary["sampling"] = sampling_json(set);
  res.summary["delta_min"] = num(report.deltaMin);
  res.summary["delta_max"] = num(max_distortion(model));
  res.summary["eigenvalues"] = num_array(srdf_eigenvalues(bp));
  res.summary["distortion_rate_bound"] = num(distortion_rate(model, set, report.codeRateBits));
  res.summary["report"] = report_json(report);
  if (sim.traceBlocks) {
    std::ostringstream out;
    write_trace(out, report);
    emit.text("trace.csv", out.str());
  }
}

void task_usim(const RunConfig& cfg, RunResult& res, Emitter& emit) {
  const ParamFamily family = read_family(cfg);
  const SamplingSet set = read_sampling(cfg, family.dim());
  const SimConfig sim = read_sim(cfg);
  const SimReport report = universal_two_step(family, set, sim);
  const auto bayes = bayes_usrdf(family, set, std::numeric_limits<double>::max(), {kAtomTol, cfg.threads});
  res.summary["sampling"] = sampling_json(set);
  res.summary["delta_min"] = num(bayes.deltaMin);
  res.summary["delta_max"] = num(bayes.deltaMax);
  res.summary["eigenvalues"] = atom_eigenvalues(family, project_family(family, set));
  res.summary["report"] = report_json(report);
  if (sim.traceBlocks) {
    std::ostringstream out;
    write_trace(out, report);
    emit.text("trace.csv", out.str());
  }
}

using TaskFn = std::function<void(const RunConfig&, RunResult&, Emitter&)>;

const std::map<std::string, TaskFn>& tasks() {
  static const std::map<std::string, TaskFn> table = {
      {"srdf", task_srdf},
      {"distrate", task_distrate},
      {"gmf-srdf", task_gmf_srdf},
      {"optimize-set", task_optimize_set},
      {"place", task_place},
      {"usrdf-bayes", [](const RunConfig& c, RunResult& r, Emitter& e) { task_usrdf(c, r, e, true); }},
      {"usrdf-nonbayes", [](const RunConfig& c, RunResult& r, Emitter& e) { task_usrdf(c, r, e, false); }},
      {"simulate", task_simulate},
      {"usim", task_usim},
  };
  return table;
}

int parse_threads(const char* text) {
  try {
    const int t = std::stoi(text);
    if (t >= 1) return t;
  } catch (const std::exception&) {
  }
  fail(std::string("SRDF_KIT_THREADS must be a positive integer, got '") + text + "'");
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {"srdf",  "distrate",    "gmf-srdf",       "optimize-set", "place",
                                                 "usrdf-bayes", "usrdf-nonbayes", "simulate", "usim"};
  return names;
}

RunConfig load_run_config(const RunOptions& options) {
  RunConfig cfg;
  try {
    cfg.doc = YAML::LoadFile(options.config.string());
  } catch (const YAML::BadFile&) {
    fail("cannot read config " + options.config.string());
  } catch (const YAML::Exception& e) {
    fail(std::string("config is not valid YAML: ") + e.what());
  }
  if (!cfg.doc.IsMap()) fail("config must be a mapping");
  cfg.task = options.task;
  if (const YAML::Node t = cfg.doc["task"]) {
    const auto declared = scalar<std::string>(t, "task");
    if (cfg.task.empty()) cfg.task = declared;
    if (declared != cfg.task) fail("config declares task '" + declared + "' but '" + cfg.task + "' was requested");
  }
  if (std::find(task_names().begin(), task_names().end(), cfg.task) == task_names().end())
    fail("unknown task '" + cfg.task + "'");
  cfg.baseDir = options.config.parent_path();
  cfg.outDir = options.outDir;
  if (const YAML::Node out = cfg.doc["output"]) {
    cfg.format = scalar_or<std::string>(out, "format", "csv", "output");
    if (cfg.format != "csv" && cfg.format != "json") fail("output.format must be csv or json");
  }
  cfg.seed = options.seed ? *options.seed : scalar_or<std::uint64_t>(cfg.doc, "seed", 1, "");
  if (options.threads) {
    cfg.threads = *options.threads;
  } else if (const char* env = std::getenv("SRDF_KIT_THREADS"); env && *env) {
    cfg.threads = parse_threads(env);
  } else {
    cfg.threads = scalar_or<int>(cfg.doc, "threads", 1, "");
  }
  if (cfg.threads < 1) fail("threads must be positive");
  return cfg;
}

RunResult run(const RunConfig& cfg) {
  RunResult res;
  res.summary = {{"tool", kToolName}, {"version", kToolVersion}, {"seed", cfg.seed}, {"task", cfg.task}};
  try {
    std::error_code ec;
    fs::create_directories(cfg.outDir, ec);
    if (ec) fail("cannot create output directory " + cfg.outDir.string());
    Emitter emit(cfg, res);
    tasks().at(cfg.task)(cfg, res, emit);
    emit.text("summary.json", res.summary.dump(2) + "\n");
  } catch (const Error& e) {
    res.exitCode = is_numerical(e.code()) ? kExitNumerical : kExitValidation;
    res.message = e.what();
  } catch (const YAML::Exception& e) {
    res.exitCode = kExitValidation;
    res.message = std::string(error_name(ErrorCode::ConfigParse)) + ": " + e.what();
  } catch (const std::exception& e) {
    res.exitCode = kExitNumerical;
    res.message = e.what();
  }
  return res;
}

RunResult run(const RunOptions& options) {
  try {
    return run(load_run_config(options));
  } catch (const Error& e) {
    RunResult res;
    res.exitCode = kExitValidation;
    res.message = e.what();
    return res;
  }
}

std::vector<std::string> summary_problems(const json& summary) {
  std::vector<std::string> problems;
  auto need = [&](const char* key, auto check, const char* what) {
    if (!summary.contains(key)) {
      problems.push_back(std::string("missing ") + key);
    } else if (!check(summary.at(key))) {
      problems.push_back(std::string(key) + " must be " + what);
    }
  };
  const auto nonnegative_integer = [](const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  };
  if (!summary.is_object()) return {"summary must be an object"};
  need("tool", [](const json& v) { return v == kToolName; }, "\"srdf-kit\"");
  need("version", [](const json& v) { return v.is_string(); }, "a string");
  need("seed", nonnegative_integer, "a nonnegative integer");
  need("task", [](const json& v) {
    return v.is_string() && std::count(task_names().begin(), task_names().end(), v.get<std::string>()) == 1;
  }, "a known task");
  need("delta_min", [](const json& v) { return v.is_number() && v.get<double>() >= 0.0; }, "a nonnegative number");
  need("delta_max", [](const json& v) { return v.is_number(); }, "a number");
  const auto positive_list = [](const json& v) {
    return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number() && x.get<double>() > 0.0; });
  };
  need("eigenvalues", [&](const json& v) {
    return v.is_array() && !v.empty() &&
           (positive_list(v) || std::all_of(v.begin(), v.end(), [&](const json& x) { return positive_list(x); }));
  }, "a list of positive numbers, or one such list per atom");
  if (problems.empty() && summary["delta_min"].get<double>() > summary["delta_max"].get<double>())
    problems.push_back("delta_min exceeds delta_max");
  if (summary.contains("curve")) {
    const json& c = summary["curve"];
    const bool columnsOk = c.contains("columns") && c["columns"].is_array() && !c["columns"].empty() &&
                           std::all_of(c["columns"].begin(), c["columns"].end(), [](const json& x) { return x.is_string(); });
    if (!columnsOk) problems.push_back("curve.columns must be a list of names");
    const bool hasFile = c.contains("file") && c["file"].is_string() && c.contains("rows") && nonnegative_integer(c["rows"]);
    const bool hasData = c.contains("data") && c["data"].is_array() && columnsOk &&
                         std::all_of(c["data"].begin(), c["data"].end(), [&](const json& row) {
                           return row.is_array() && row.size() == c["columns"].size();
                         });
    if (hasFile == hasData) problems.push_back("curve must carry exactly one of file+rows or data");
  }
  return problems;
}

}  // namespace srdf::cli
