#include "srdf/setopt.hpp"

#include "srdf/format.hpp"
#include "srdf/parallel.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace srdf {

std::size_t binomial(std::size_t m, std::size_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  std::size_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = m - k + i;
    if (c > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    c = c * num / i;
  }
  return c;
}

namespace {

std::vector<std::vector<Eigen::Index>> all_subsets(Eigen::Index m, Eigen::Index k) {
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> cur(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    Eigen::Index i = k - 1;
    while (i >= 0 && cur[i] == m - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (Eigen::Index j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace

SetSearchResult best_fixed_set(const CovarianceModel& model, Eigen::Index k, const SetObjective& objective,
                               int threads, std::size_t subsetCap) {
  const Eigen::Index m = model.dim();
  if (k < 1 || k > m) throw Error(ErrorCode::InvalidSamplingSet, "subset size must satisfy 1 <= k <= m");
  const std::size_t count = binomial(static_cast<std::size_t>(m), static_cast<std::size_t>(k));
  if (count > subsetCap) {
    std::ostringstream os;
    os << count << " subsets exceed cap " << subsetCap;
    throw Error(ErrorCode::TooManySubsets, os.str());
  }

  const auto subsets = all_subsets(m, k);
  std::vector<SubsetRow> rows(subsets.size(), SubsetRow{SamplingSet::all(m), 0, 0, 0});
  const double deltaMax = max_distortion(model);
  parallel_for(subsets.size(), threads, [&](std::size_t i) {
    SamplingSet set(subsets[i], m);
    const BlockPartition bp = partition(model, set);
    SubsetRow row{set, min_distortion(bp), std::numeric_limits<double>::quiet_NaN(), 0.0};
    if (objective.kind == SetObjectiveKind::MinDeltaMin) {
      row.objective = row.deltaMin;
    } else {
      row.rateBits = objective.delta > row.deltaMin
                         ? srdf_from_spectrum(srdf_eigenvalues(bp), row.deltaMin, deltaMax, objective.delta).rateBits
                         : std::numeric_limits<double>::infinity();
      row.objective = row.rateBits;
    }
    rows[i] = std::move(row);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].objective < rows[best].objective) best = i;
  return SetSearchResult{rows[best].set, rows[best].objective, std::move(rows)};
}

void write_subset_table(std::ostream& out, const SetSearchResult& result) {
  out << "subset,delta_min_variance,rate_bits\n";
  for (const auto& row : result.table) {
    std::string name;
    for (long i : row.set.one_based()) name += (name.empty() ? "" : " ") + std::to_string(i);
    out << name << ',' << format_number(row.deltaMin) << ',' << format_number(row.rateBits) << '\n';
  }
}

}  // namespace srdf
