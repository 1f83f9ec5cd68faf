#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wrckit/core/vec.hpp"

namespace wrckit {

enum class MetricKind { Euclidean, WeightedL2, L1 };

std::string to_string(MetricKind kind);
MetricKind parse_metric_kind(const std::string& name);

// Distance on the instance space together with its equivalence constants
// against the Euclidean distance d_E:
//
//   lower() * d(x,y) <= d_E(x,y) <= upper() * d(x,y).
//
// Constants are derived analytically per kind:
//   euclidean     d = d_E                      -> (1, 1)
//   weighted-l2   d = sqrt(sum w_i t_i^2)      -> (1/sqrt(max w), 1/sqrt(min w))
//   l1            d_E <= d_1 <= sqrt(K) d_E    -> (1/sqrt(K), 1)
class Metric {
 public:
  // Euclidean distance on any dimension (dim 0 = unchecked).
  Metric() = default;
  static Metric euclidean(std::size_t dim = 0);
  static Metric l1(std::size_t dim);
  static Metric weighted_l2(std::vector<double> weights);
  static Metric from_kind(MetricKind kind, std::size_t dim);

  double operator()(ConstVec x, ConstVec y) const;

  // Gradient of z -> d(x, z). Zero at z == x.
  Instance gradient(ConstVec x, ConstVec z) const;

  // The d-nearest point to x on the hyperplane {z : normal.(z - anchor) = 0}.
  Instance project_onto_hyperplane(ConstVec x, ConstVec normal, ConstVec anchor) const;

  MetricKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& weights() const { return weights_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::string name() const { return to_string(kind_); }

 private:
  Metric(MetricKind kind, std::size_t dim, std::vector<double> weights);

  MetricKind kind_ = MetricKind::Euclidean;
  std::size_t dim_ = 0;
  std::vector<double> weights_;
  double lower_ = 1.0;
  double upper_ = 1.0;
};

// Free-function form; throws Error("dimension-mismatch").
double distance(const Metric& m, ConstVec x, ConstVec y);

}  // namespace wrckit
