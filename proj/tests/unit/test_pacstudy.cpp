#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "wrckit/core/error.hpp"
#include "wrckit/pacstudy/gap.hpp"

using namespace wrckit;

namespace {

PacProblem flat_problem(double alpha) {
  ProblemOptions po;
  po.flat = true;
  return make_problem(1, 1.0, alpha, RngHandle{1, 0}, po);
}

CegaConfig oracle_gen() {
  CegaConfig g;
  g.kind = CegaKind::LinearOracle;
  return g;
}

RobustnessConfig small_rob() {
  RobustnessConfig rob;
  rob.radius = 0.1;
  rob.samples = 100;
  rob.volume_samples = 512;
  return rob;
}

TrainConfig quick_train() {
  TrainConfig tc;
  tc.validation_fraction = 0.0;
  tc.epochs = 200;
  return tc;
}

}  // namespace

TEST_CASE("flat boundary is a half-space") {
  auto p = flat_problem(1.0);
  CHECK(p.boundary->constant_value() == 0.5);
  CHECK(p.bayes->decide(Instance{0.3, 0.51}) == 1);
  CHECK(p.bayes->decide(Instance{0.9, 0.49}) == -1);
  REQUIRE(p.bayes->hyperplane());
  CHECK(p.bayes->hyperplane()->b == -0.5);
}

TEST_CASE("single cosine term") {
  auto b = std::make_shared<const SmoothBoundary>(1, 2.0, std::vector<SmoothBoundary::Term>{{{1}, 0.1}});
  auto p = make_problem(b, 1.0);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double u = i / 1000.0;
    const double f = b->value(Instance{u});
    CHECK(f == doctest::Approx(0.5 + 0.1 * std::cos(std::numbers::pi * u)));
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  CHECK(lo == doctest::Approx(0.4));
  CHECK(hi == doctest::Approx(0.6));
  const double u = 0.3;
  CHECK(b->gradient(Instance{u})[0] == doctest::Approx(-0.1 * std::numbers::pi * std::sin(std::numbers::pi * u)));
  CHECK(p.bayes->decide(Instance{0.0, 0.61}) == 1);
  CHECK(p.bayes->decide(Instance{0.0, 0.59}) == -1);
}

TEST_CASE("random boundaries stay interior and smooth") {
  for (double gamma : {0.5, 1.0, 3.0, 8.0}) {
    for (std::size_t l : {1u, 2u}) {
      auto p = make_problem(l, gamma, 1.0, RngHandle{static_cast<std::uint64_t>(gamma * 10) + l, 0});
      CHECK(p.dim() == l + 1);
      CHECK(p.boundary->range_bound() <= 0.4);
      CHECK(holder_proxy(*p.boundary, gamma) <= ProblemOptions{}.holder_bound);
    }
  }
  ProblemOptions tight;
  tight.amplitude = 5.0;
  tight.max_retries = 3;
  CHECK_THROWS_WITH_AS(make_problem(1, 0.5, 1.0, RngHandle{}, tight), doctest::Contains("boundary-not-interior"),
                       Error);
  CHECK_THROWS_AS(make_problem(0, 1.0, 1.0, RngHandle{}), Error);
  CHECK_THROWS_AS(make_problem(1, 1.0, 0.0, RngHandle{}), Error);
}

TEST_CASE("noise profile") {
  auto p = flat_problem(1.0);
  CHECK(p.noise.eta(Instance{0.2, 0.5}) == 0.5);
  CHECK(p.noise.eta(Instance{0.2, 0.55}) == doctest::Approx(0.75));
  CHECK(p.noise.eta(Instance{0.2, 0.45}) == doctest::Approx(0.25));
  CHECK(p.noise.eta(Instance{0.2, 0.9}) == 1.0);
  auto steep = flat_problem(1e6);
  CHECK(steep.noise.eta(Instance{0.2, 0.5001}) > 0.999);
  CHECK(steep.noise.eta(Instance{0.2, 0.4999}) < 0.001);
  CHECK(p.noise.margin_constant() == doctest::Approx(0.4));
}

TEST_CASE("margin certification") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    auto p = make_problem(1, 2.0, alpha, RngHandle{3, 0});
    auto m = certify_margin(p.noise, RngHandle{4, 0}, 1000);
    CHECK(m.passed);
    for (std::size_t i = 0; i < 3; ++i) CHECK(m.estimate[i] <= m.bound[i]);
  }
}

TEST_CASE("sample_labeled") {
  auto p = flat_problem(1.0);
  auto one = sample_labeled(p, 1, RngHandle{});
  CHECK(one.size() == 1);
  one.validate();

  auto hook = p;
  hook.noise.constant_eta = 1.0;
  auto all = sample_labeled(hook, 200, RngHandle{5, 0});
  for (int y : all.labels) CHECK(y == 1);

  // Agreement with h* is E[max(eta, 1 - eta)] = 0.5 + 0.5 (2 t0 a/(a+1) + 1 - 2 t0).
  const double alpha = 1.0;
  const double t0 = 0.1;
  const double expected = 0.5 + 0.5 * (2 * t0 * alpha / (alpha + 1) + 1 - 2 * t0);
  auto big = sample_labeled(p, 10000, RngHandle{6, 0});
  std::size_t agree = 0;
  for (std::size_t i = 0; i < big.size(); ++i) agree += big.labels[i] == p.bayes->decide(big.rows[i]);
  CHECK(static_cast<double>(agree) / 10000.0 == doctest::Approx(expected).epsilon(0.01));
  CHECK_THROWS_AS(sample_labeled(p, 0, RngHandle{}), Error);
}

TEST_CASE("injected Bayes classifier has zero gap") {
  auto p = flat_problem(1.0);
  GapOptions opts;
  opts.inject_bayes = true;
  auto g = wrc_gap(p, logistic_learner(quick_train()), oracle_gen(), small_rob(), 64, 20, RngHandle{1, 0}, opts);
  CHECK(g.gap == 0.0);
  CHECK(g.std_error == 0.0);
  CHECK(g.wrc_model == g.wrc_bayes);
}

TEST_CASE("gap of a linear model against closed-form strengths") {
  // With the exact oracle, both strengths are distances to a horizontal line,
  // so the estimated gap can be recomputed by hand from the traces.
  auto p = flat_problem(1.0);
  const LinearModel shifted({0.0, 1.0}, -0.55);
  RobustnessConfig rob = small_rob();
  auto g = wrc_gap_for(p, shifted, oracle_gen(), rob, 10, RngHandle{2, 0});
  rob.normalized = true;
  Rng points(RngHandle{2, 0}.child(0x505453));
  double diff = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    Instance x{points.uniform(), points.uniform()};
    rob.trace = true;
    auto a = discrete_wrc(rob, shifted, oracle_gen(), x, RngHandle{2, 0}.child(i));
    auto b = discrete_wrc(rob, *p.bayes, oracle_gen(), x, RngHandle{2, 0}.child(i));
    for (const auto& s : a.trace) {
      if (s.valid) CHECK(s.strength_y == doctest::Approx(std::abs(s.y[1] - 0.55) + 1e-6).epsilon(1e-9));
    }
    for (const auto& s : b.trace) {
      if (s.valid) CHECK(s.strength_y == doctest::Approx(std::abs(s.y[1] - 0.5) + 1e-6).epsilon(1e-9));
    }
    diff += a.value - b.value;
    ++n;
  }
  CHECK(g.gap == doctest::Approx(std::abs(diff / static_cast<double>(n))).epsilon(1e-12));
}

TEST_CASE("Bayes-oracle consistency on noiseless labels") {
  auto p = flat_problem(1e6);
  TrainConfig tc = quick_train();
  tc.epochs = 100;
  auto model = logistic_learner(tc)(sample_labeled(p, 4096, RngHandle{8, 0}), 8);
  Rng probes(RngHandle{9, 0});
  std::size_t disagree = 0;
  for (int i = 0; i < 10000; ++i) {
    Instance x{probes.uniform(), probes.uniform()};
    disagree += model->decide(x) != p.bayes->decide(x);
  }
  CHECK(disagree <= 500);
}

TEST_CASE("common random numbers reduce the gap standard error") {
  auto p = flat_problem(1.0);
  auto learner = logistic_learner(quick_train());
  GapOptions indep;
  indep.common_random_numbers = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto shared = wrc_gap(p, learner, oracle_gen(), small_rob(), 64, 15, RngHandle{seed, 3});
    auto apart = wrc_gap(p, learner, oracle_gen(), small_rob(), 64, 15, RngHandle{seed, 3}, indep);
    CHECK(shared.std_error <= apart.std_error);
  }
}

TEST_CASE("gap curve bookkeeping") {
  auto p = flat_problem(1.0);
  GapOptions opts;
  opts.inject_bayes = true;
  auto curve = gap_curve(p, logistic_learner(quick_train()), oracle_gen(), small_rob(), {16, 32, 64}, 1, 5,
                         RngHandle{3, 0}, opts);
  CHECK(curve.degenerate);
  CHECK(std::isnan(curve.slope));
  for (double g : curve.mean_gap) CHECK(g == 0.0);
  std::ostringstream csv;
  write_gap_csv(csv, curve);
  CHECK(csv.str().rfind("T,repeat,gap,stderr\n16,0,0,0\n", 0) == 0);
  CHECK(csv.str().find("16,mean,0,\n") != std::string::npos);
  CHECK(csv.str().find("summary,degenerate,1,\n") != std::string::npos);

  CHECK_THROWS_AS(gap_curve(p, logistic_learner(quick_train()), oracle_gen(), small_rob(), {16, 32}, 1, 5,
                            RngHandle{}, opts),
                  Error);
  CHECK_THROWS_AS(gap_curve(p, logistic_learner(quick_train()), oracle_gen(), small_rob(), {16, 16, 32}, 1, 5,
                            RngHandle{}, opts),
                  Error);
}

TEST_CASE("rank correlation and line fit") {
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3, 4}, {3, 4, 2, 1}) == doctest::Approx(-0.8));
  CHECK(spearman({1, 2, 3}, {1, 1, 2}) == doctest::Approx(0.8660254037844387));
  CHECK(std::isnan(spearman({1, 2, 3}, {5, 5, 5})));
  auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_std_error == doctest::Approx(0.0));
}
