#pragma once

#include <cstddef>
#include <vector>

#include "wrckit/cega/cega.hpp"
#include "wrckit/core/metric.hpp"
#include "wrckit/models/classifier.hpp"

namespace wrckit {

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t count = 0;
};

Summary summarize(const std::vector<double>& values);

struct CostSummary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;  // invalid results
};

// Mean and sample std of d(x, x̄) over the valid results. Throws
// Error("no-valid-results") if none is valid.
CostSummary cost(const Metric& m, const std::vector<CounterfactualResult>& results);

// Percentage of results whose counterfactual is classified differently from
// its source, re-evaluated with `c`. Throws Error("empty-results").
double validity(const Classifier& c, const std::vector<CounterfactualResult>& results);

struct LofResult {
  std::vector<double> scores;
  std::size_t inliers = 0;  // scores <= threshold
  double inlier_fraction = 0.0;
  bool floored = false;  // some mean reachability distance hit the 1e-12 floor
};

inline constexpr double kLofDensityFloor = 1e-12;

// Local Outlier Factor of each query point against `reference` (Euclidean,
// exactly k neighbours with ties broken by index). Reference points do not
// count themselves as neighbours. Throws Error("invalid-config") unless
// reference.size() > k.
LofResult lof_scores(const std::vector<Instance>& reference, const std::vector<Instance>& points,
                     std::size_t k = 10, double inlier_threshold = 1.5);

}  // namespace wrckit
