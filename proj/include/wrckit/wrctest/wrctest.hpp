#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wrckit/cega/cega.hpp"
#include "wrckit/robustness/robustness.hpp"

namespace wrckit {

enum class BallPolicy { AnchorFixed, Recentering };
std::string to_string(BallPolicy policy);
BallPolicy parse_ball_policy(const std::string& name);

struct WrcTestConfig {
  double tau = 1.0;
  std::size_t max_steps = 30;
  // Gaussian scale of substitute draws; 0 means radius / 3.
  double sigma = 0.0;
  // robustness.radius is both the WRC ball and the substitute ball.
  RobustnessConfig robustness;
  BallPolicy policy = BallPolicy::AnchorFixed;

  double effective_sigma() const { return sigma > 0.0 ? sigma : robustness.radius / 3.0; }
  void validate() const;
};

struct TrajectoryPoint {
  Instance x;
  double wrc = std::numeric_limits<double>::infinity();  // +inf when undefined
};

struct WrcTestOutcome {
  bool passed = false;
  Instance x_final;
  std::size_t steps = 0;
  std::vector<TrajectoryPoint> trajectory;  // steps + 1 entries
  std::optional<CounterfactualResult> counterfactual;  // present iff passed
  std::string failure_reason;                          // empty iff passed
  // Stream of the WRC estimate at x_final; recomputing discrete_wrc with it
  // reproduces trajectory.back().wrc.
  RngHandle final_rng;
};

struct WrcTestResult {
  bool passed = false;
  WrcEstimate estimate;
};

// Predicate discrete_wrc(x) <= tau, no search.
WrcTestResult wrc_test(const WrcTestConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                       const RngHandle& rng);

// Resample substitutes x' ~ N(current, sigma^2 I) restricted to B(ball, r) ∩
// [0,1]^K, where ball is the input (anchor-fixed) or the current point
// (recentering), while WRC(current) >= tau and steps < max_steps. One draw is
// one step. Passes iff the loop ends with WRC < tau before max_steps; the
// counterfactual is then the one the final WRC estimate used.
// `initial_wrc`, when given, must be the step-0 estimate
// discrete_wrc(cfg.robustness, c, gen, x, wrc_step_stream(rng, 0)) (+inf if
// undefined); it saves recomputing a value the caller already holds.
WrcTestOutcome find_robust_counterfactual(const WrcTestConfig& cfg, const Classifier& c, const CegaConfig& gen,
                                          ConstVec x, const RngHandle& rng,
                                          std::optional<double> initial_wrc = std::nullopt);

// Stream of the WRC estimate taken after `step` substitute draws.
RngHandle wrc_step_stream(const RngHandle& rng, std::size_t step);

}  // namespace wrckit
