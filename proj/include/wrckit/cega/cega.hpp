#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "wrckit/core/metric.hpp"
#include "wrckit/core/rng.hpp"
#include "wrckit/core/vec.hpp"
#include "wrckit/models/classifier.hpp"

namespace wrckit {

enum class CegaKind { Gradient, Bisection, Prototype, LinearOracle };

std::string to_string(CegaKind kind);
CegaKind parse_cega_kind(const std::string& name);

struct CegaConfig {
  CegaKind kind = CegaKind::Gradient;
  Metric metric;
  std::size_t max_iterations = 400;
  double step_size = 0.05;
  // Initial hinge weight; doubled on stall up to lambda * 2^10.
  double lambda = 10.0;
  // Distance pushed past the decision boundary so validity is decidable.
  double overshoot = 1e-6;
  // Bisection: number of opposite-class anchors; probe budget when no
  // reference set is given.
  std::size_t directions = 20;
  std::size_t probe_budget = 2000;
  // Rounds of tangent-plane refinement after a boundary point is found.
  std::size_t refine_rounds = 8;
  // Prototype: centroid of the `prototypes` nearest opposite-class reference
  // points, pulled with weight `prototype_weight * |z - prototype|^2`.
  std::size_t prototypes = 5;
  double prototype_weight = 1.0;
  // Reference points (anchors for bisection, prototypes for prototype).
  std::shared_ptr<const std::vector<Instance>> reference;

  void validate() const;
};

struct CounterfactualResult {
  Instance source;
  Instance counterfactual;  // equals source when no counterfactual was found
  Instance perturbation;    // counterfactual - source
  bool valid = false;
  bool clipped = false;
  double strength = std::numeric_limits<double>::infinity();
  std::string generator;
  std::size_t iterations = 0;
};

// Nearest opposite-class point under cfg.metric, approximately for the
// search-based kinds and exactly for LinearOracle on affine classifiers.
// Invalid results carry strength = +inf. Deterministic in (cfg, c, x, rng).
CounterfactualResult generate(const CegaConfig& cfg, const Classifier& c, ConstVec x, const RngHandle& rng);

// Closed-form nearest point on the hyperplane w.x + b = 0 (under `metric`,
// Euclidean by default), pushed `overshoot` past it and clipped to the unit
// cube (flagged `clipped` when the projection leaves the cube).
// Throws Error("degenerate-hyperplane") for w = 0.
CounterfactualResult linear_oracle(const std::vector<double>& w, double b, ConstVec x,
                                   double overshoot = 1e-6, const Metric& metric = Metric());

}  // namespace wrckit
