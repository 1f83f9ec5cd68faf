#include <cmath>
#include <sstream>

#include "doctest.h"
#include "wrckit/core/error.hpp"
#include "wrckit/core/rng.hpp"
#include "wrckit/evalharness/data.hpp"
#include "wrckit/evalharness/synthetic.hpp"
#include "wrckit/models/gradcheck.hpp"
#include "wrckit/models/mlp.hpp"
#include "wrckit/models/model_io.hpp"
#include "wrckit/models/training.hpp"

using namespace wrckit;

namespace {

MlpModel random_mlp(std::size_t k, std::size_t h1, std::size_t h2, std::uint64_t seed) {
  MlpModel m(k, h1, h2);
  Rng rng(RngHandle{seed, 0});
  m.initialize(rng);
  return m;
}

Instance random_interior(Rng& rng, std::size_t k, double h) {
  Instance x(k);
  for (double& v : x) v = rng.uniform(h, 1.0 - h);
  return x;
}

// 1-D data split at 0.5: label +1 right of the threshold.
Dataset split_line(std::size_t n) {
  Dataset d;
  d.name = "line";
  d.feature_names = {"x"};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    d.rows.push_back({x});
    d.labels.push_back(x >= 0.5 ? 1 : -1);
  }
  return d;
}

}  // namespace

TEST_CASE("tie rule and linear decisions") {
  const LinearModel m({1.0, 0.0}, -0.5);
  CHECK(m.decide(Instance{0.7, 0.2}) == 1);
  CHECK(m.decide(Instance{0.3, 0.2}) == -1);
  CHECK(m.decide(Instance{0.5, 0.9}) == 1);
  CHECK(ConstantModel(2, 0.0).decide(Instance{0.1, 0.1}) == 1);

  const MlpModel mlp = random_mlp(3, 8, 8, 1);
  Rng rng(RngHandle{2, 0});
  for (int i = 0; i < 100000; ++i) {
    const Instance x = random_interior(rng, 3, 0.0);
    const double s = mlp.score(x);
    REQUIRE(mlp.decide(x) == (s >= 0.0 ? 1 : -1));
  }
}

TEST_CASE("finite difference check") {
  const LinearModel lin({2.0, -1.0}, 0.1);
  CHECK(finite_diff_check(lin, Instance{0.3, 0.6}, 1e-5).max_relative_error <= 1e-8);

  Rng rng(RngHandle{9, 0});
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MlpModel m = random_mlp(4, 16, 16, seed);
    for (int t = 0; t < 20; ++t) {
      const Instance x = random_interior(rng, 4, 1e-3);
      if (m.kink_adjacent(x, 1e-6)) continue;
      ++checked;
      REQUIRE(finite_diff_check(m, x, 1e-6).max_relative_error <= 1e-4);
    }
  }
  CHECK(checked > 300);

  // One unit whose pre-activation vanishes at x1 = 0.5.
  MlpModel kink(2, 1, 1);
  kink.set_parameters({1.0, 0.0, -0.5, 1.0, 0.0, 1.0, 0.0});
  const auto rep = finite_diff_check(kink, Instance{0.5, 0.3}, 1e-4);
  CHECK(rep.kink_adjacent);
  CHECK(rep.max_relative_error > 1e-4);
  CHECK_FALSE(finite_diff_check(kink, Instance{0.8, 0.3}, 1e-4).kink_adjacent);

  struct Opaque final : Classifier {
    std::size_t dim() const override { return 1; }
    double score(ConstVec x) const override { return x[0]; }
    std::string kind() const override { return "opaque"; }
  } opaque;
  CHECK_THROWS_WITH_AS(finite_diff_check(opaque, Instance{0.5}, 1e-4), doctest::Contains("not-differentiable"),
                       Error);
}

TEST_CASE("mlp is continuous with a bounded empirical slope") {
  const MlpModel m = random_mlp(3, 16, 16, 4);
  Rng rng(RngHandle{4, 1});
  double lip = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Instance x = random_interior(rng, 3, 0.01);
    Instance y = x;
    for (double& v : y) v += rng.uniform(-1e-3, 1e-3);
    const double d = vec::norm2(vec::sub(x, y));
    if (d > 0.0) lip = std::max(lip, std::abs(m.score(x) - m.score(y)) / d);
  }
  CHECK(std::isfinite(lip));
  // Spot check the slope bound on fresh pairs at a wider scale.
  for (int i = 0; i < 1000; ++i) {
    const Instance x = random_interior(rng, 3, 0.0), y = random_interior(rng, 3, 0.0);
    REQUIRE(std::abs(m.score(x) - m.score(y)) <= 1.5 * lip * vec::norm2(vec::sub(x, y)) + 1e-12);
  }
}

TEST_CASE("model files round-trip bit for bit") {
  const MlpModel m = random_mlp(5, 7, 3, 12);
  std::stringstream buf;
  save_model(m, buf);
  CHECK(buf.str().rfind("wrckit-model v1 mlp 5 7 3\n", 0) == 0);
  const auto back = load_model(buf);
  Rng rng(RngHandle{1, 1});
  for (int i = 0; i < 1000; ++i) {
    const Instance x = random_interior(rng, 5, 0.0);
    REQUIRE(back->score(x) == m.score(x));
  }

  for (const auto& model : std::vector<std::shared_ptr<Classifier>>{
           std::make_shared<LinearModel>(std::vector<double>{0.1, -1.0 / 3.0}, 0.7),
           std::make_shared<RadialModel>(std::vector<double>{0.5, 0.25}, 0.3),
           std::make_shared<ConstantModel>(2, -1.5)}) {
    std::stringstream s;
    save_model(*model, s);
    const auto r = load_model(s);
    CHECK(r->kind() == model->kind());
    for (int i = 0; i < 200; ++i) {
      const Instance x = random_interior(rng, 2, 0.0);
      REQUIRE(r->score(x) == model->score(x));
    }
  }

  std::stringstream bad("wrckit-model v2 linear 1 0 0\n1 2\n");
  CHECK_THROWS_WITH_AS(load_model(bad), doctest::Contains("invalid-model-file"), Error);
  std::stringstream short_file("wrckit-model v1 linear 2 0 0\n1 2\n");
  CHECK_THROWS_WITH_AS(load_model(short_file), doctest::Contains("invalid-model-file"), Error);
  std::stringstream trailing("wrckit-model v1 linear 1 0 0\n1 2 3\n");
  CHECK_THROWS_WITH_AS(load_model(trailing), doctest::Contains("invalid-model-file"), Error);
}

TEST_CASE("mlp training on separable and xor data") {
  Dataset sep = make_linear_separable(200, 2, 0.2, 0);
  TrainConfig cfg;
  cfg.seed = 0;
  const auto t = train_mlp(sep, cfg);
  CHECK(t.report.validation_accuracy >= 0.95);
  CHECK_FALSE(t.report.below_threshold);
  CHECK(t.report.epochs_run == cfg.epochs);

  Dataset x = normalize(make_xor_blobs(400, 0.08, 3));
  TrainConfig xc;
  xc.hidden1 = xc.hidden2 = 16;
  xc.epochs = 300;
  const auto tx = train_mlp(x, xc);
  CHECK(tx.report.validation_accuracy >= 0.9);

  // identical config and data reproduce every weight
  const auto again = train_mlp(sep, cfg);
  CHECK(again.model->parameters() == t.model->parameters());
  CHECK(again.report.final_loss == t.report.final_loss);
}

TEST_CASE("logistic training") {
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.learning_rate = 0.5;
  cfg.validation_fraction = 0.0;
  const auto t = train_logistic(split_line(200), cfg);
  const double boundary = -t.model->bias() / t.model->weights()[0];
  CHECK(std::abs(boundary - 0.5) <= 0.05);
  CHECK(t.report.train_accuracy >= 0.95);

  cfg.epochs = 0;
  const auto z = train_logistic(split_line(20), cfg);
  CHECK(z.model->score(Instance{0.1}) == z.model->bias());
  CHECK(z.model->score(Instance{0.9}) == z.model->bias());
  CHECK(z.report.epochs_run == 0);

  TrainConfig sc;
  const auto s = train_logistic(make_linear_separable(300, 3, 0.2, 5), sc);
  CHECK(s.report.validation_accuracy >= 0.95);
}

TEST_CASE("degenerate labels, divergence and config errors") {
  Dataset same = split_line(40);
  for (int& y : same.labels) y = 1;
  TrainConfig cfg;
  cfg.epochs = 20;
  const auto t = train_mlp(same, cfg);
  CHECK(t.report.degenerate);
  CHECK(t.report.validation_accuracy == 1.0);

  TrainConfig wild;
  wild.learning_rate = 1e300;
  wild.epochs = 50;
  CHECK_THROWS_WITH_AS(train_mlp(make_linear_separable(100, 2, 0.1, 1), wild),
                       doctest::Contains("training-diverged"), Error);

  TrainConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_WITH_AS(train_logistic(split_line(10), bad), doctest::Contains("invalid-config"), Error);
  bad = TrainConfig{};
  bad.accuracy_threshold = 1.5;
  CHECK_THROWS_WITH_AS(train_logistic(split_line(10), bad), doctest::Contains("invalid-config"), Error);
  CHECK_THROWS_WITH_AS(train_mlp(Dataset{}, TrainConfig{}), doctest::Contains("empty-dataset"), Error);
}
