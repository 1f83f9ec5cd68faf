// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/lof_oracle.hpp"
#include "wrckit/cega/cega.hpp"
#include "wrckit/cli/cli.hpp"
#include "wrckit/core/error.hpp"
#include "wrckit/evalharness/data.hpp"
#include "wrckit/evalharness/metrics.hpp"
#include "wrckit/evalharness/report.hpp"
#include "wrckit/evalharness/synthetic.hpp"
#include "wrckit/models/training.hpp"
#include "wrckit/pacstudy/gap.hpp"
#include "wrckit/robustness/robustness.hpp"
#include "wrckit/wrctest/wrctest.hpp"

using namespace wrckit;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Verdict()> run;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Instance uniform_point(Rng& rng, std::size_t k, double lo, double hi) {
  Instance x(k);
  for (double& v : x) v = rng.uniform(lo, hi);
  return x;
}

CegaConfig generator_of(CegaKind kind, const Metric& metric = Metric()) {
  CegaConfig g;
  g.kind = kind;
  g.metric = metric;
  return g;
}

// Random hyperplane through an interior point, with an instance whose exact
// projection stays inside the cube (so the closed form is the true optimum).
struct LinearCase {
  std::vector<double> w;
  double b = 0.0;
  Instance x;
};

LinearCase interior_linear_case(Rng& rng, std::size_t k, const Metric& metric = Metric()) {
  for (;;) {
    LinearCase c;
    c.w.resize(k);
    for (double& v : c.w) v = rng.normal();
    const Instance p = uniform_point(rng, k, 0.3, 0.7);
    c.b = -vec::dot(c.w, p);
    c.x = uniform_point(rng, k, 0.1, 0.9);
    if (!linear_oracle(c.w, c.b, c.x, 1e-6, metric).clipped) return c;
  }
}

// 1. Gradient and bisection strengths agree with the closed form.
Verdict linear_oracle_equivalence() {
  Rng rng(RngHandle{2024, 1});
  double worst = 0.0;
  std::size_t bad = 0;
  const std::size_t dims[] = {2, 5, 10};
  for (std::size_t t = 0; t < 100; ++t) {
    const LinearCase c = interior_linear_case(rng, dims[t % 3]);
    const LinearModel model(c.w, c.b);
    const double exact = linear_oracle(c.w, c.b, c.x).strength;
    for (CegaKind kind : {CegaKind::Gradient, CegaKind::Bisection}) {
      const auto r = generate(generator_of(kind), model, c.x, RngHandle{t, 1});
      const double rel = std::abs(r.strength - exact) / exact;
      worst = std::max(worst, std::isfinite(rel) ? rel : 1e300);
      bad += !(r.valid && rel <= 1e-3);
    }
  }
  return {bad == 0, "200 comparisons, worst relative error " + num(worst)};
}

// 2. Injected single sample on the half-plane x1 = 0.5.
Verdict discrete_wrc_hand_value() {
  const LinearModel half({1.0, 0.0}, -0.5);
  RobustnessConfig cfg;
  double worst = 0.0;
  std::string values;
  for (CegaKind kind : {CegaKind::LinearOracle, CegaKind::Gradient, CegaKind::Bisection}) {
    const auto est = discrete_wrc(cfg, half, generator_of(kind), Instance{0.2, 0.3}, {{0.3, 0.3}}, RngHandle{});
    worst = std::max(worst, std::abs(est.value - 0.999990));
    values += (values.empty() ? "" : ", ") + to_string(kind) + " " + num(est.value);
  }
  return {worst <= 1e-5, values};
}

// 3. Per-sample contributions obey the 1-Lipschitz strength bound.
Verdict lipschitz_contribution_bound() {
  Rng rng(RngHandle{31, 0});
  std::size_t pairs = 0, violations = 0;
  double worst = -1e300;
  const double radii[] = {0.01, 0.05, 0.1};
  for (std::size_t m = 0; m < 120; ++m) {
    const std::size_t k = 2 + m % 4;
    const bool l1 = m % 5 == 4;
    const Metric metric = l1 ? Metric::l1(k) : Metric::euclidean(k);
    const LinearCase c = interior_linear_case(rng, k, metric);
    const LinearModel model(c.w, c.b);
    const CegaKind kind = m % 2 == 0 || l1 ? CegaKind::LinearOracle : CegaKind::Gradient;
    RobustnessConfig cfg;
    cfg.radius = radii[m % 3];
    cfg.samples = 100;
    cfg.metric = metric;
    cfg.trace = true;
    const auto est = discrete_wrc(cfg, model, generator_of(kind, metric), c.x, RngHandle{m, 3});
    for (const auto& s : est.trace) {
      if (!s.valid) continue;
      ++pairs;
      const double slack = s.contribution - s.d_xy * cfg.phi(s.d_xy);
      worst = std::max(worst, slack);
      violations += slack > 1e-6;
    }
  }
  return {pairs >= 10000 && violations == 0,
          std::to_string(pairs) + " pairs, max contribution - d phi(d) = " + num(worst)};
}

// 4. Circle classifier, antipodal samples: locations jump, strengths do not.
Verdict src_wrc_separation() {
  const RadialModel circle({0.5, 0.5}, 0.3);
  RobustnessConfig cfg;
  const Instance x{0.5, 0.5};
  const std::vector<Instance> ys{{0.51, 0.5}, {0.49, 0.5}, {0.5, 0.51}, {0.5, 0.49}};
  const CegaConfig gen = generator_of(CegaKind::Gradient);
  const auto wrc = discrete_wrc(cfg, circle, gen, x, ys, RngHandle{3, 0});
  const auto src = discrete_src(cfg, circle, gen, x, ys, RngHandle{3, 0});
  const double ratio = src.value / wrc.value;
  return {ratio >= 10.0, "SRC " + num(src.value) + ", WRC " + num(wrc.value) + ", ratio " + num(ratio)};
}

// 5. Search contract: immediate pass, exhaustive failure, bounded drift.
Verdict search_contract() {
  std::size_t pass_ok = 0, pass_total = 0, fail_ok = 0, fail_total = 0;
  auto contract = [&](const Classifier& c, const CegaConfig& gen, const Instance& x, double r, std::uint64_t s) {
    WrcTestConfig cfg;
    cfg.robustness.radius = r;
    cfg.tau = 1e6;
    const auto pass = find_robust_counterfactual(cfg, c, gen, x, RngHandle{s, 5});
    ++pass_total;
    pass_ok += pass.passed && pass.steps == 0 && pass.counterfactual && pass.counterfactual->valid;
    cfg.tau = 1e-30;
    const auto fail = find_robust_counterfactual(cfg, c, gen, x, RngHandle{s, 6});
    ++fail_total;
    fail_ok += !fail.passed && fail.steps == 30 && fail.failure_reason == "no-robust-counterfactual";
  };

  Rng rng(RngHandle{55, 0});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const LinearCase c = interior_linear_case(rng, 2);
    contract(LinearModel(c.w, c.b), generator_of(CegaKind::LinearOracle), c.x, 2e-5, s);
  }
  TrainConfig tc;
  tc.hidden1 = tc.hidden2 = 16;
  tc.epochs = 200;
  const auto mlp = train_mlp(normalize(make_xor_blobs(400, 0.08, 3)), tc).model;
  for (std::uint64_t s = 0; s < 3; ++s) {
    contract(*mlp, generator_of(CegaKind::Gradient), uniform_point(rng, 2, 0.2, 0.8), 2e-5, 100 + s);
  }

  std::size_t within = 0;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const LinearCase c = interior_linear_case(rng, 2 + s % 3);
    // every fourth run starts on a cube face so the ball is cut by the boundary
    Instance x = c.x;
    if (s % 4 == 0) x[0] = 0.0;
    WrcTestConfig cfg;
    cfg.tau = 1e-30;
    cfg.robustness.radius = s % 2 ? 0.05 : 2e-5;
    cfg.robustness.samples = 10;
    const auto out = find_robust_counterfactual(cfg, LinearModel(c.w, c.b), generator_of(CegaKind::LinearOracle),
                                                x, RngHandle{s, 7});
    const double d = Metric()(x, out.x_final);
    worst = std::max(worst, d / cfg.robustness.radius);
    within += d <= cfg.robustness.radius && vec::in_unit_cube(out.x_final);
  }
  const bool ok = pass_ok == pass_total && fail_ok == fail_total && within == 1000;
  return {ok, "tau=1e6 pass at step 0: " + std::to_string(pass_ok) + "/" + std::to_string(pass_total) +
                  "; tau=1e-30 fail at 30: " + std::to_string(fail_ok) + "/" + std::to_string(fail_total) +
                  "; drift <= r: " + std::to_string(within) + "/1000 (max d/r " + num(worst) + ")"};
}

// 6. Table pattern on the bundled synthetic sets.
Verdict wrc_test_improvement() {
  const std::vector<std::string> names{"two-moons", "circles", "xor"};
  bool ok = true;
  std::string detail;
  for (const std::string& name : names) {
    const Dataset raw = ingest_csv(std::string(WRCKIT_DATA_DIR) + "/" + name + ".csv", IngestOptions{});
    const Split parts = train_test_split(normalize(raw), 0.3, 1);
    TrainConfig tc;
    tc.hidden1 = tc.hidden2 = 16;
    tc.epochs = 200;
    tc.seed = 1;
    const auto trained = train_mlp(parts.train, tc);
    const double acc = accuracy(*trained.model, parts.test);
    if (acc < 0.70) ok = false;

    std::size_t wins[2] = {0, 0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      TableProtocol p;
      p.dataset = name;
      p.test = parts.test.rows;
      p.reference = parts.train.rows;
      p.model = trained.model.get();
      p.model_accuracy = acc;
      p.n_samples = 20;
      p.metrics = {MetricKind::Euclidean};
      p.tau_quantile = 0.5;
      p.wrc.robustness.radius = 1e-5 * static_cast<double>(raw.dim());
      p.seed = seed;
      const EvalReport rep = run_table(p);
      for (std::size_t g = 0; g < 2; ++g) {
        const ReportRow& bare = rep.rows[2 * g];
        const ReportRow& tested = rep.rows[2 * g + 1];
        wins[g] += tested.wrc.count > 0 && tested.wrc.mean <= bare.wrc.mean &&
                   tested.validity >= bare.validity - 2.0;
      }
    }
    ok = ok && wins[0] >= 18 && wins[1] >= 18;
    detail += (detail.empty() ? "" : "; ") + name + " acc " + num(acc) + " gradient " + std::to_string(wins[0]) +
              "/20 prototype " + std::to_string(wins[1]) + "/20";
  }
  return {ok, detail};
}

// 7. KD-tree LOF against the direct definition.
Verdict lof_equivalence() {
  Rng rng(RngHandle{77, 0});
  double worst = 0.0;
  std::size_t compared = 0;
  const std::size_t sizes[] = {11, 40, 150, 300, 500};
  for (std::size_t t = 0; t < 10; ++t) {
    const std::size_t n = sizes[t % 5];
    const std::size_t k = 2 + t % 4;
    std::vector<Instance> ref;
    for (std::size_t i = 0; i < n; ++i) {
      // two clusters plus uniform background
      Instance p = uniform_point(rng, k, 0.0, 1.0);
      if (i % 3 == 0) {
        for (double& v : p) v = 0.2 + 0.05 * rng.normal();
      } else if (i % 3 == 1) {
        for (double& v : p) v = 0.7 + 0.02 * rng.normal();
      }
      ref.push_back(p);
    }
    std::vector<Instance> q;
    for (std::size_t i = 0; i < 100; ++i) q.push_back(uniform_point(rng, k, -0.2, 1.2));
    const auto fast = lof_scores(ref, q, 10);
    const auto slow = oracle::lof(ref, q, 10);
    for (std::size_t i = 0; i < q.size(); ++i) {
      worst = std::max(worst, std::abs(fast.scores[i] - slow[i]) / std::abs(slow[i]));
      ++compared;
    }
  }
  return {worst <= 1e-9, std::to_string(compared) + " scores, worst relative error " + num(worst)};
}

// 8. Gap curve on the flat-boundary problem.
Verdict pac_trend() {
  ProblemOptions po;
  po.flat = true;
  const PacProblem problem = make_problem(1, 1.0, 1.0, RngHandle{1, 0}, po);
  TrainConfig tc;
  tc.validation_fraction = 0.0;
  const Learner learner = logistic_learner(tc);
  const CegaConfig gen = generator_of(CegaKind::LinearOracle);
  RobustnessConfig rob;
  rob.radius = 0.1;
  rob.samples = 1000;
  const std::vector<std::size_t> grid{64, 256, 1024, 4096};
  const GapCurve curve = gap_curve(problem, learner, gen, rob, grid, 10, 200, RngHandle{7, 0});
  std::size_t wins = 0;
  for (std::size_t r = 0; r < 10; ++r) wins += curve.cells[3][r].gap < curve.cells[0][r].gap;

  GapOptions hook;
  hook.inject_bayes = true;
  const GapCurve bayes = gap_curve(problem, learner, gen, rob, grid, 2, 50, RngHandle{7, 1}, hook);
  bool zero = true;
  for (const auto& row : bayes.cells) {
    for (const auto& cell : row) zero = zero && cell.gap == 0.0;
  }
  const bool ok = curve.spearman <= -0.8 && wins >= 9 && zero;
  return {ok, "spearman " + num(curve.spearman) + ", gap(4096) < gap(64) in " + std::to_string(wins) +
                  "/10, slope " + num(curve.slope) + ", injected-Bayes gaps all zero: " + (zero ? "yes" : "no")};
}

// 9. cmd_eval reruns are byte-identical.
Verdict eval_determinism() {
  const fs::path dir = fs::path(WRCKIT_TEST_TMP) / "acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = std::string(WRCKIT_DATA_DIR) + "/two-moons.csv";
  const std::string model = (dir / "m.txt").string();
  std::ostringstream sink;
  if (cli::run({"train", "-d", data, "--model-out", model, "--epochs", "200", "--train.hidden1", "16",
                "--train.hidden2", "16", "-s", "3"},
               sink, sink) != 0) {
    return {false, "training failed: " + sink.str()};
  }
  const std::vector<std::string> args{"eval", "-d", data, "-m", model, "-n", "10", "-k", "20",
                                      "-o", (dir / "r.csv").string(), "--json", (dir / "r.json").string(),
                                      "-s", "11"};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  std::string csv[2], json[2];
  for (int i = 0; i < 2; ++i) {
    if (cli::run(args, sink, sink) != 0) return {false, "eval failed: " + sink.str()};
    csv[i] = slurp(dir / "r.csv");
    json[i] = slurp(dir / "r.json");
  }
  const bool ok = !csv[0].empty() && csv[0] == csv[1] && json[0] == json[1];
  return {ok, "CSV " + std::to_string(csv[0].size()) + " bytes, JSON " + std::to_string(json[0].size()) +
                  " bytes, identical: " + (ok ? "yes" : "no")};
}

// 10. Margin condition holds for every generated noise model.
Verdict tsybakov_certification() {
  std::size_t passed = 0, total = 0;
  double worst = 0.0;
  for (std::size_t l : {1, 2}) {
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      const PacProblem p = make_problem(l, 2.0, alpha, RngHandle{l * 10 + static_cast<std::uint64_t>(alpha * 2), 0});
      const MarginCheck m = certify_margin(p.noise, RngHandle{l, static_cast<std::uint64_t>(alpha * 4)});
      ++total;
      passed += m.passed;
      for (std::size_t i = 0; i < m.t.size(); ++i) worst = std::max(worst, m.estimate[i] / m.bound[i]);
    }
  }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) +
                               " models pass at three t values, max estimate/bound " + num(worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "linear-oracle equivalence", 10, linear_oracle_equivalence},
      {2, "discrete WRC hand value", 1, discrete_wrc_hand_value},
      {3, "Lipschitz contribution bound", 30, lipschitz_contribution_bound},
      {4, "SRC/WRC separation", 5, src_wrc_separation},
      {5, "WRC-Test search contract", 60, search_contract},
      {6, "WRC-Test improvement", 600, wrc_test_improvement},
      {7, "LOF oracle equivalence", 30, lof_equivalence},
      {8, "PAC-WRC trend", 600, pac_trend},
      {9, "determinism", 120, eval_determinism},
      {10, "Tsybakov certification", 30, tsybakov_certification},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d (%s): %s [%.2fs of %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                v.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
