#include <cmath>
#include <limits>

#include "doctest.h"
#include "wrckit/core/error.hpp"
#include "wrckit/wrctest/wrctest.hpp"

using namespace wrckit;

namespace {

const LinearModel kHalf({1.0, 0.0}, -0.5);
const Instance kX{0.2, 0.3};

CegaConfig oracle_gen() {
  CegaConfig g;
  g.kind = CegaKind::LinearOracle;
  return g;
}

WrcTestConfig base(double tau) {
  WrcTestConfig cfg;
  cfg.tau = tau;
  cfg.robustness.radius = 0.02;
  cfg.robustness.samples = 20;
  return cfg;
}

}  // namespace

TEST_CASE("wrc_test predicate") {
  auto cfg = base(std::numeric_limits<double>::max());
  CHECK(wrc_test(cfg, kHalf, oracle_gen(), kX, RngHandle{1, 0}).passed);

  cfg.tau = 0.5;
  auto est = discrete_wrc(cfg.robustness, kHalf, oracle_gen(), kX, {{0.3, 0.3}}, RngHandle{});
  CHECK(est.value == doctest::Approx(0.99999).epsilon(1e-5));
  CHECK_FALSE(est.value <= cfg.tau);
  cfg.tau = 1.5;
  CHECK(est.value <= cfg.tau);

  const ConstantModel one(2, 1.0);
  CegaConfig grad;
  CHECK_THROWS_WITH_AS(wrc_test(cfg, one, grad, kX, RngHandle{}), doctest::Contains("estimate-undefined"), Error);
}

TEST_CASE("immediate pass with a huge threshold") {
  auto out = find_robust_counterfactual(base(1e6), kHalf, oracle_gen(), kX, RngHandle{2, 0});
  CHECK(out.passed);
  CHECK(out.steps == 0);
  CHECK(out.x_final == kX);
  CHECK(out.trajectory.size() == 1);
  REQUIRE(out.counterfactual);
  CHECK(out.counterfactual->counterfactual == generate(oracle_gen(), kHalf, kX, RngHandle{}).counterfactual);
  CHECK(out.failure_reason.empty());
}

TEST_CASE("vanishing threshold fails after exactly max_steps draws") {
  const LinearModel generic({0.8, -0.6}, -0.1);
  auto cfg = base(1e-30);
  auto out = find_robust_counterfactual(cfg, generic, oracle_gen(), Instance{0.4, 0.5}, RngHandle{3, 0});
  CHECK_FALSE(out.passed);
  CHECK(out.steps == 30);
  CHECK(out.trajectory.size() == 31);
  CHECK_FALSE(out.counterfactual);
  CHECK(out.failure_reason == "no-robust-counterfactual");
  for (const auto& p : out.trajectory) CHECK(Metric()(p.x, Instance{0.4, 0.5}) <= cfg.robustness.radius);
}

TEST_CASE("tiny radius keeps the estimate under the Lipschitz bound") {
  // delta <= d(x,y) <= r, so each term is at most r * phi(r) < 1 and the
  // sum at most k * r / (r + eps).
  auto cfg = base(1.0);
  cfg.robustness.radius = 2e-5;
  cfg.robustness.samples = 100;
  const double bound = 100 * 2e-5 / (2e-5 + 1e-6);
  auto out = find_robust_counterfactual(cfg, kHalf, oracle_gen(), kX, RngHandle{4, 0});
  for (const auto& p : out.trajectory) CHECK(p.wrc <= bound + 1e-9);
}

TEST_CASE("passing outcomes are reproducible from the recorded stream") {
  auto cfg = base(0.0);
  cfg.robustness.radius = 0.05;
  const LinearModel generic({0.8, -0.6}, -0.1);
  const CegaConfig gen = oracle_gen();
  // Threshold between the smallest and largest value seen on a failing run.
  cfg.tau = 1e-30;
  auto probe = find_robust_counterfactual(cfg, generic, gen, Instance{0.4, 0.5}, RngHandle{5, 0});
  double lo = probe.trajectory.front().wrc;
  double hi = lo;
  for (const auto& p : probe.trajectory) {
    lo = std::min(lo, p.wrc);
    hi = std::max(hi, p.wrc);
  }
  cfg.tau = 0.5 * (lo + probe.trajectory.front().wrc);
  REQUIRE(lo < cfg.tau);
  auto out = find_robust_counterfactual(cfg, generic, gen, Instance{0.4, 0.5}, RngHandle{5, 0});
  REQUIRE(out.passed);
  CHECK(out.steps > 0);
  CHECK(out.trajectory.size() == out.steps + 1);
  const double again = discrete_wrc(cfg.robustness, generic, gen, out.x_final, out.final_rng).value;
  CHECK(again == out.trajectory.back().wrc);
  CHECK(again <= cfg.tau);
  CHECK(out.counterfactual->valid);

  // Raising tau never turns a pass into a failure.
  for (double tau : {cfg.tau * 1.01, 0.5 * (cfg.tau + hi), hi * 2}) {
    auto looser = cfg;
    looser.tau = tau;
    CHECK(find_robust_counterfactual(looser, generic, gen, Instance{0.4, 0.5}, RngHandle{5, 0}).passed);
  }
}

TEST_CASE("drift stays within r under the anchor-fixed policy") {
  auto cfg = base(1e-30);
  cfg.robustness.samples = 5;
  const Instance x{0.01, 0.99};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto out = find_robust_counterfactual(cfg, kHalf, oracle_gen(), x, RngHandle{seed, 0});
    CHECK(Metric()(x, out.x_final) <= cfg.robustness.radius);
    CHECK(vec::in_unit_cube(out.x_final));
  }
}

TEST_CASE("recentering lets the substitute wander") {
  auto cfg = base(1e-30);
  cfg.robustness.samples = 5;
  cfg.policy = BallPolicy::Recentering;
  cfg.sigma = cfg.robustness.radius;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto out = find_robust_counterfactual(cfg, kHalf, oracle_gen(), kX, RngHandle{seed, 0});
    for (std::size_t i = 1; i < out.trajectory.size(); ++i) {
      CHECK(Metric()(out.trajectory[i].x, out.trajectory[i - 1].x) <= cfg.robustness.radius);
    }
    worst = std::max(worst, Metric()(kX, out.x_final));
  }
  CHECK(worst > cfg.robustness.radius);
}

TEST_CASE("rejection exhaustion is a failure outcome") {
  auto cfg = base(1e-30);
  cfg.sigma = 1e3;
  cfg.robustness.max_rejects = 3;
  cfg.robustness.radius = 1e-4;
  auto out = find_robust_counterfactual(cfg, kHalf, oracle_gen(), kX, RngHandle{6, 0});
  CHECK_FALSE(out.passed);
  CHECK(out.failure_reason == "rejection-budget-exhausted");
  CHECK(out.trajectory.size() == out.steps + 1);
}

TEST_CASE("config validation and policy names") {
  auto cfg = base(0.0);
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.tau = 1.0;
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK(parse_ball_policy("recentering") == BallPolicy::Recentering);
  CHECK(to_string(BallPolicy::AnchorFixed) == "anchor-fixed");
  CHECK(base(1.0).effective_sigma() == doctest::Approx(0.02 / 3));
}
