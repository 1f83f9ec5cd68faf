#include "wrckit/models/classifier.hpp"

#include <cmath>

#include "wrckit/core/error.hpp"

namespace wrckit {

Instance Classifier::gradient(ConstVec) const {
  throw Error("not-differentiable", kind());
}

LinearModel::LinearModel(std::vector<double> w, double b) : w_(std::move(w)), b_(b) {
  if (w_.empty()) throw Error("invalid-model", "linear model needs at least one weight");
}

double LinearModel::score(ConstVec x) const { return vec::dot(w_, x) + b_; }

Instance LinearModel::gradient(ConstVec x) const {
  vec::require_same_dim(x.size(), w_.size(), "gradient");
  return w_;
}

RadialModel::RadialModel(std::vector<double> center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (center_.empty()) throw Error("invalid-model", "radial model needs a center");
  if (!(radius_ > 0.0)) throw Error("invalid-model", "radius must be positive");
}

double RadialModel::score(ConstVec x) const {
  vec::require_same_dim(x.size(), center_.size(), "score");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - center_[i]) * (x[i] - center_[i]);
  return radius_ * radius_ - d2;
}

Instance RadialModel::gradient(ConstVec x) const {
  vec::require_same_dim(x.size(), center_.size(), "gradient");
  Instance g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = -2.0 * (x[i] - center_[i]);
  return g;
}

BayesOracle::BayesOracle(std::shared_ptr<const BoundaryFunction> boundary)
    : boundary_(std::move(boundary)) {
  if (!boundary_) throw Error("invalid-model", "missing boundary");
}

double BayesOracle::score(ConstVec x) const {
  vec::require_same_dim(x.size(), dim(), "score");
  const std::size_t l = boundary_->dim();
  return x[l] - boundary_->value(x.first(l));
}

Instance BayesOracle::gradient(ConstVec x) const {
  vec::require_same_dim(x.size(), dim(), "gradient");
  const std::size_t l = boundary_->dim();
  const Instance gf = boundary_->gradient(x.first(l));
  Instance g(l + 1);
  for (std::size_t i = 0; i < l; ++i) g[i] = -gf[i];
  g[l] = 1.0;
  return g;
}

std::optional<Hyperplane> BayesOracle::hyperplane() const {
  const auto c = boundary_->constant_value();
  if (!c) return std::nullopt;
  Hyperplane h;
  h.w.assign(dim(), 0.0);
  h.w.back() = 1.0;
  h.b = -*c;
  return h;
}

}  // namespace wrckit
