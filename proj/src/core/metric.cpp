#include "wrckit/core/metric.hpp"

#include <algorithm>
#include <cmath>

#include "wrckit/core/error.hpp"

namespace wrckit {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::WeightedL2: return "weighted-l2";
    case MetricKind::L1: return "l1";
  }
  return "unknown";
}

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "euclidean" || name == "l2") return MetricKind::Euclidean;
  if (name == "l1") return MetricKind::L1;
  if (name == "weighted-l2") return MetricKind::WeightedL2;
  throw Error("unknown-metric", name);
}

Metric::Metric(MetricKind kind, std::size_t dim, std::vector<double> weights)
    : kind_(kind), dim_(dim), weights_(std::move(weights)) {
  switch (kind_) {
    case MetricKind::Euclidean:
      lower_ = upper_ = 1.0;
      break;
    case MetricKind::WeightedL2: {
      if (weights_.empty()) throw Error("invalid-metric", "weighted-l2 needs weights");
      for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) throw Error("invalid-metric", "weights must be positive");
      }
      const auto [lo, hi] = std::minmax_element(weights_.begin(), weights_.end());
      lower_ = 1.0 / std::sqrt(*hi);
      upper_ = 1.0 / std::sqrt(*lo);
      break;
    }
    case MetricKind::L1:
      if (dim_ == 0) throw Error("invalid-metric", "l1 needs a dimension");
      lower_ = 1.0 / std::sqrt(static_cast<double>(dim_));
      upper_ = 1.0;
      break;
  }
}

Metric Metric::euclidean(std::size_t dim) { return Metric(MetricKind::Euclidean, dim, {}); }

Metric Metric::l1(std::size_t dim) { return Metric(MetricKind::L1, dim, {}); }

Metric Metric::weighted_l2(std::vector<double> weights) {
  const std::size_t dim = weights.size();
  return Metric(MetricKind::WeightedL2, dim, std::move(weights));
}

Metric Metric::from_kind(MetricKind kind, std::size_t dim) {
  switch (kind) {
    case MetricKind::Euclidean: return euclidean(dim);
    case MetricKind::L1: return l1(dim);
    case MetricKind::WeightedL2: return weighted_l2(std::vector<double>(dim, 1.0));
  }
  return euclidean(dim);
}

double Metric::operator()(ConstVec x, ConstVec y) const {
  vec::require_same_dim(x.size(), y.size(), "distance");
  if (dim_ != 0) vec::require_same_dim(x.size(), dim_, "distance");
  double s = 0.0;
  switch (kind_) {
    case MetricKind::Euclidean:
      for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    case MetricKind::WeightedL2:
      for (std::size_t i = 0; i < x.size(); ++i) s += weights_[i] * (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    case MetricKind::L1:
      for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
      return s;
  }
  return s;
}

Instance Metric::gradient(ConstVec x, ConstVec z) const {
  const double d = (*this)(x, z);
  Instance g(x.size(), 0.0);
  if (d == 0.0) return g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = z[i] - x[i];
    switch (kind_) {
      case MetricKind::Euclidean: g[i] = t / d; break;
      case MetricKind::WeightedL2: g[i] = weights_[i] * t / d; break;
      case MetricKind::L1: g[i] = (t > 0.0) - (t < 0.0); break;
    }
  }
  return g;
}

Instance Metric::project_onto_hyperplane(ConstVec x, ConstVec normal, ConstVec anchor) const {
  vec::require_same_dim(x.size(), normal.size(), "project_onto_hyperplane");
  const double offset = vec::dot(normal, vec::sub(x, anchor));
  Instance out(x.begin(), x.end());
  switch (kind_) {
    case MetricKind::Euclidean: {
      const double nn = vec::dot(normal, normal);
      if (nn == 0.0) throw Error("degenerate-hyperplane");
      for (std::size_t i = 0; i < x.size(); ++i) out[i] -= offset * normal[i] / nn;
      break;
    }
    case MetricKind::WeightedL2: {
      double q = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) q += normal[i] * normal[i] / weights_[i];
      if (q == 0.0) throw Error("degenerate-hyperplane");
      for (std::size_t i = 0; i < x.size(); ++i) out[i] -= offset * normal[i] / (weights_[i] * q);
      break;
    }
    case MetricKind::L1: {
      // The l1-nearest point moves only the coordinate with the largest |normal|.
      std::size_t j = 0;
      for (std::size_t i = 1; i < normal.size(); ++i) {
        if (std::abs(normal[i]) > std::abs(normal[j])) j = i;
      }
      if (normal[j] == 0.0) throw Error("degenerate-hyperplane");
      out[j] -= offset / normal[j];
      break;
    }
  }
  return out;
}

double distance(const Metric& m, ConstVec x, ConstVec y) { return m(x, y); }

}  // namespace wrckit
