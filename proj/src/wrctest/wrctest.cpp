#include "wrckit/wrctest/wrctest.hpp"

#include "wrckit/core/error.hpp"
#include "wrckit/core/sampling.hpp"

namespace wrckit {
namespace {

constexpr std::uint64_t kWrcStream = 0x575243;
constexpr std::uint64_t kDrawStream = 0x445257;

double wrc_or_inf(const WrcTestConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                  const RngHandle& rng) {
  try {
    return discrete_wrc(cfg.robustness, c, gen, x, rng).value;
  } catch (const Error& e) {
    if (e.code() == "estimate-undefined") return std::numeric_limits<double>::infinity();
    throw;
  }
}

}  // namespace

std::string to_string(BallPolicy policy) {
  return policy == BallPolicy::AnchorFixed ? "anchor-fixed" : "recentering";
}

BallPolicy parse_ball_policy(const std::string& name) {
  if (name == "anchor-fixed") return BallPolicy::AnchorFixed;
  if (name == "recentering") return BallPolicy::Recentering;
  throw Error("unknown-ball-policy", name);
}

void WrcTestConfig::validate() const {
  if (!(tau > 0.0)) throw Error("invalid-config", "tau must be positive");
  if (max_steps < 1) throw Error("invalid-config", "max steps must be at least 1");
  if (sigma < 0.0) throw Error("invalid-config", "sigma must be positive");
  robustness.validate();
}

RngHandle wrc_step_stream(const RngHandle& rng, std::size_t step) { return rng.child(kWrcStream).child(step); }

WrcTestResult wrc_test(const WrcTestConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                       const RngHandle& rng) {
  cfg.validate();
  WrcTestResult r;
  r.estimate = discrete_wrc(cfg.robustness, c, gen, x, rng);
  r.passed = r.estimate.value <= cfg.tau;
  return r;
}

WrcTestOutcome find_robust_counterfactual(const WrcTestConfig& cfg, const Classifier& c, const CegaConfig& gen,
                                          ConstVec x, const RngHandle& rng, std::optional<double> initial_wrc) {
  cfg.validate();
  const double r = cfg.robustness.radius;
  const double sigma = cfg.effective_sigma();
  WrcTestOutcome out;
  Instance current(x.begin(), x.end());
  Rng draws(rng.child(kDrawStream));

  double w = initial_wrc ? *initial_wrc : wrc_or_inf(cfg, c, gen, current, wrc_step_stream(rng, 0));
  out.trajectory.push_back({current, w});
  while (w >= cfg.tau && out.steps < cfg.max_steps) {
    const ConstVec ball = cfg.policy == BallPolicy::AnchorFixed ? x : ConstVec(current);
    try {
      current = sample_gaussian_in_ball(ball, current, sigma, r, cfg.robustness.max_rejects, draws);
    } catch (const Error& e) {
      if (e.code() != "rejection-budget-exhausted") throw;
      out.failure_reason = e.code();
      break;
    }
    ++out.steps;
    w = wrc_or_inf(cfg, c, gen, current, wrc_step_stream(rng, out.steps));
    out.trajectory.push_back({current, w});
  }
  out.x_final = current;
  out.final_rng = wrc_step_stream(rng, out.steps);

  if (out.failure_reason.empty()) {
    if (w < cfg.tau && out.steps < cfg.max_steps) {
      CounterfactualResult cf = generate(gen, c, current, generator_stream(out.final_rng));
      if (cf.valid) {
        out.passed = true;
        out.counterfactual = std::move(cf);
      } else {
        out.failure_reason = "cf-unobtainable";
      }
    } else {
      out.failure_reason = "no-robust-counterfactual";
    }
  }
  return out;
}

}  // namespace wrckit
