#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wrckit/core/vec.hpp"

namespace wrckit {

// Affine decision function w.x + b.
struct Hyperplane {
  std::vector<double> w;
  double b = 0.0;
};

// Score-based binary classifier. decide(x) = sign(score(x)) with the tie
// rule sign(0) = +1; every validity check in the library relies on it.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::size_t dim() const = 0;
  virtual double score(ConstVec x) const = 0;
  virtual std::string kind() const = 0;

  int decide(ConstVec x) const { return score(x) >= 0.0 ? 1 : -1; }

  virtual bool differentiable() const { return false; }
  // Throws Error("not-differentiable") unless differentiable().
  virtual Instance gradient(ConstVec x) const;

  // Exact affine form, when the classifier has one.
  virtual std::optional<Hyperplane> hyperplane() const { return std::nullopt; }

  // True when the score is not smooth anywhere in the box [x - h, x + h]
  // along the coordinate axes (e.g. a ReLU changes state).
  virtual bool kink_adjacent(ConstVec /*x*/, double /*h*/) const { return false; }
};

class LinearModel final : public Classifier {
 public:
  LinearModel(std::vector<double> w, double b);

  std::size_t dim() const override { return w_.size(); }
  double score(ConstVec x) const override;
  std::string kind() const override { return "linear"; }
  bool differentiable() const override { return true; }
  Instance gradient(ConstVec x) const override;
  std::optional<Hyperplane> hyperplane() const override { return Hyperplane{w_, b_}; }

  const std::vector<double>& weights() const { return w_; }
  double bias() const { return b_; }

 private:
  std::vector<double> w_;
  double b_;
};

// score = radius^2 - |x - center|^2 : positive inside the sphere.
class RadialModel final : public Classifier {
 public:
  RadialModel(std::vector<double> center, double radius);

  std::size_t dim() const override { return center_.size(); }
  double score(ConstVec x) const override;
  std::string kind() const override { return "radial"; }
  bool differentiable() const override { return true; }
  Instance gradient(ConstVec x) const override;

  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  std::vector<double> center_;
  double radius_;
};

class ConstantModel final : public Classifier {
 public:
  ConstantModel(std::size_t dim, double value) : dim_(dim), value_(value) {}

  std::size_t dim() const override { return dim_; }
  double score(ConstVec) const override { return value_; }
  std::string kind() const override { return "constant"; }
  bool differentiable() const override { return true; }
  Instance gradient(ConstVec x) const override { return Instance(x.size(), 0.0); }

  double value() const { return value_; }

 private:
  std::size_t dim_;
  double value_;
};

// Boundary x_{l+1} = f(x_{1:l}) of a graph-type decision region.
class BoundaryFunction {
 public:
  virtual ~BoundaryFunction() = default;
  virtual std::size_t dim() const = 0;  // l
  virtual double value(ConstVec u) const = 0;
  virtual Instance gradient(ConstVec u) const = 0;
  // Set when f is constant.
  virtual std::optional<double> constant_value() const { return std::nullopt; }
};

// Bayes classifier of a graph-boundary problem: decide(x) = sign(x_{l+1} - f(x_{1:l})).
class BayesOracle final : public Classifier {
 public:
  explicit BayesOracle(std::shared_ptr<const BoundaryFunction> boundary);

  std::size_t dim() const override { return boundary_->dim() + 1; }
  double score(ConstVec x) const override;
  std::string kind() const override { return "bayes-oracle"; }
  bool differentiable() const override { return true; }
  Instance gradient(ConstVec x) const override;
  std::optional<Hyperplane> hyperplane() const override;

  const BoundaryFunction& boundary() const { return *boundary_; }

 private:
  std::shared_ptr<const BoundaryFunction> boundary_;
};

}  // namespace wrckit
