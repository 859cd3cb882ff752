#pragma once

#include "srdf/srdf_core.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace srdf {

inline constexpr std::size_t kDefaultSubsetCap = 1'000'000;

enum class SetObjectiveKind { MinDeltaMin, MinRateAt };

struct SetObjective {
  SetObjectiveKind kind = SetObjectiveKind::MinDeltaMin;
  double delta = 0.0;  // used by MinRateAt
};

struct SubsetRow {
  SamplingSet set;
  double deltaMin = 0.0;
  double rateBits = 0.0;  // +inf when delta <= deltaMin; NaN for MinDeltaMin
  double objective = 0.0;
};

struct SetSearchResult {
  SamplingSet bestSet;
  double objective = 0.0;
  std::vector<SubsetRow> table;  // lexicographic order
};

/// Number of k-subsets of an m-set, saturating at SIZE_MAX.
std::size_t binomial(std::size_t m, std::size_t k);

/// Exhaustive search over all k-subsets; ties resolve to the
/// lexicographically first subset.
SetSearchResult best_fixed_set(const CovarianceModel& model, Eigen::Index k, const SetObjective& objective,
                               int threads = 1, std::size_t subsetCap = kDefaultSubsetCap);

/// CSV with header "subset,delta_min_variance,rate_bits"; subsets as 1-based
/// indices joined by spaces.
void write_subset_table(std::ostream& out, const SetSearchResult& result);

}  // namespace srdf
