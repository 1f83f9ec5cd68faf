#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "wrckit/core/dataset.hpp"
#include "wrckit/core/rng.hpp"
#include "wrckit/models/classifier.hpp"

namespace wrckit {

// f(u) = 0.5 + sum_j a_j cos(pi * j.u) over integer frequency vectors j != 0.
class SmoothBoundary final : public BoundaryFunction {
 public:
  struct Term {
    std::vector<int> frequency;
    double coefficient = 0.0;
  };

  SmoothBoundary(std::size_t l, double gamma, std::vector<Term> terms);

  std::size_t dim() const override { return l_; }
  double value(ConstVec u) const override;
  Instance gradient(ConstVec u) const override;
  std::optional<double> constant_value() const override;

  double gamma() const { return gamma_; }
  const std::vector<Term>& terms() const { return terms_; }
  // 0.5 +- sum |a_j|, a guaranteed enclosure of the range.
  double range_bound() const;

 private:
  std::size_t l_;
  double gamma_;
  std::vector<Term> terms_;
};

// Finite-difference Hölder-norm proxy on a grid of `points` per axis: the sum
// over axis-derivative orders 0..m (m = largest integer below gamma) of the
// maximal absolute derivative, plus the largest Hölder quotient of the order-m
// derivative with exponent gamma - m.
double holder_proxy(const BoundaryFunction& f, double gamma, std::size_t points = 33);

// eta(x) = Pr(Y = 1 | x) = 0.5 + 0.5 sign(g) min(1, |g| / t0)^(1/alpha),
// g(x) = x_{l+1} - f(x_{1:l}). For an interior boundary and t0 <= 0.1 this
// gives Pr(|eta - 1/2| <= t) = c t^alpha with c = 2^(alpha+1) t0 exactly.
struct NoiseModel {
  double alpha = 1.0;
  double t0 = 0.1;
  std::shared_ptr<const BoundaryFunction> boundary;
  std::optional<double> constant_eta;  // test hook: eta ignores x

  double eta(ConstVec x) const;
  double margin_constant() const;
};

struct MarginCheck {
  std::vector<double> t;
  std::vector<double> estimate;  // Monte-Carlo Pr(|eta - 1/2| <= t)
  std::vector<double> bound;     // 1.1 c t^alpha
  std::size_t samples = 0;
  bool passed = false;
};

// Crude Monte Carlo on uniform x at t in {t0/4, t0/2, t0}. The sample size is
// chosen so the smallest probability expects about `target_hits` hits, capped
// at max_samples.
MarginCheck certify_margin(const NoiseModel& noise, RngHandle rng, std::size_t target_hits = 4000,
                           std::size_t max_samples = 50'000'000);

struct ProblemOptions {
  double amplitude = 0.1;    // A
  double decay_extra = 0.5;  // eta_decay in |a_j| <= A |j|^-(gamma + l/2 + eta_decay)
  int max_frequency = 4;     // per-axis frequency cap; sum |j_i| <= max_frequency
  double holder_bound = 1e4;  // R
  double t0 = 0.1;
  bool flat = false;  // all a_j = 0
  std::size_t max_retries = 100;
};

struct PacProblem {
  std::size_t l = 1;
  double gamma = 1.0;
  std::shared_ptr<const SmoothBoundary> boundary;
  NoiseModel noise;
  std::shared_ptr<const BayesOracle> bayes;

  std::size_t dim() const { return l + 1; }
};

// Errors: "invalid-config" for l < 1, gamma <= 0, alpha <= 0;
// "boundary-not-interior" when retries run out.
PacProblem make_problem(std::size_t l, double gamma, double alpha, const RngHandle& rng,
                        const ProblemOptions& options = {});
// Problem around an explicit boundary.
PacProblem make_problem(std::shared_ptr<const SmoothBoundary> boundary, double alpha, double t0 = 0.1);

// T points uniform on [0,1]^{l+1}, y = +1 with probability eta(x).
Dataset sample_labeled(const PacProblem& problem, std::size_t T, const RngHandle& rng);

}  // namespace wrckit
