#include "wrckit/models/training.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <numeric>

#include "wrckit/core/error.hpp"
#include "wrckit/core/rng.hpp"

namespace wrckit {
namespace {

// Computes the score, then adds scale(score) * d(score)/d(theta) into grad.
using ScaleFn = std::function<double(double)>;
using ScoreGrad = std::function<double(ConstVec x, const ScaleFn& scale, std::vector<double>& grad)>;

double logistic_loss(double margin) {
  // log(1 + exp(-m)) without overflow
  return margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

struct Split {
  std::vector<std::size_t> train, validation;
};

Split split_indices(std::size_t n, double fraction, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  const auto n_val = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  Split s;
  if (n_val == 0 || n_val >= n) {
    s.train = idx;
    s.validation = idx;
    return s;
  }
  s.validation.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  s.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  return s;
}

double subset_accuracy(const Classifier& c, const Dataset& data, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i : idx) correct += c.decide(data.rows[i]) == data.labels[i];
  return static_cast<double>(correct) / static_cast<double>(idx.size());
}

TrainReport run_sgd(const Dataset& data, const TrainConfig& cfg, const Classifier& model,
                    std::vector<double>& params, const std::function<void()>& sync,
                    const ScoreGrad& score_grad, Rng& rng) {
  data.validate();
  cfg.validate();
  const Split split = split_indices(data.size(), cfg.validation_fraction, rng);

  TrainReport report;
  report.train_size = split.train.size();
  report.validation_size = split.validation.size();
  report.degenerate = std::all_of(data.labels.begin(), data.labels.end(),
                                  [&](int y) { return y == data.labels.front(); });

  std::vector<std::size_t> order = split.train;
  std::vector<double> grad(params.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double inv = 1.0 / static_cast<double>(stop - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t i = order[b];
        const double y = data.labels[i];
        // d loss / d score = -y * sigmoid(-y * s)
        score_grad(data.rows[i],
                   [&](double s) {
                     epoch_loss += logistic_loss(y * s);
                     return -y * inv / (1.0 + std::exp(y * s));
                   },
                   grad);
      }
      for (std::size_t p = 0; p < params.size(); ++p) {
        params[p] -= cfg.learning_rate * (grad[p] + cfg.weight_decay * params[p]);
      }
      sync();
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss) ||
        !std::all_of(params.begin(), params.end(), [](double v) { return std::isfinite(v); })) {
      throw Error("training-diverged", "epoch " + std::to_string(epoch));
    }
    report.final_loss = epoch_loss;
    report.epochs_run = epoch + 1;
  }

  report.train_accuracy = subset_accuracy(model, data, split.train);
  report.validation_accuracy = subset_accuracy(model, data, split.validation);
  report.below_threshold = report.validation_accuracy < cfg.accuracy_threshold;
  return report;
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size == 0) throw Error("invalid-config", "batch size must be positive");
  if (!(learning_rate > 0.0)) throw Error("invalid-config", "learning rate must be positive");
  if (weight_decay < 0.0) throw Error("invalid-config", "weight decay must be non-negative");
  if (accuracy_threshold < 0.0 || accuracy_threshold > 1.0) {
    throw Error("invalid-config", "accuracy threshold must lie in [0,1]");
  }
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    throw Error("invalid-config", "validation fraction must lie in [0,1)");
  }
  if (hidden1 == 0 || hidden2 == 0) throw Error("invalid-config", "hidden widths must be positive");
}

Trained<MlpModel> train_mlp(const Dataset& data, const TrainConfig& cfg) {
  data.validate();
  Rng rng(RngHandle{cfg.seed, 0x4d4c50});
  auto model = std::make_shared<MlpModel>(data.dim(), cfg.hidden1, cfg.hidden2);
  model->initialize(rng);
  std::vector<double> params = model->parameters();
  auto sync = [&] { model->set_parameters(params); };
  auto score_grad = [&](ConstVec x, const ScaleFn& scale, std::vector<double>& g) {
    return model->accumulate_parameter_gradient(x, scale, g);
  };
  TrainReport report = run_sgd(data, cfg, *model, params, sync, score_grad, rng);
  return {model, report};
}

Trained<LinearModel> train_logistic(const Dataset& data, const TrainConfig& cfg) {
  data.validate();
  Rng rng(RngHandle{cfg.seed, 0x4c4f47});
  const std::size_t k = data.dim();
  std::vector<double> params(k + 1, 0.0);
  auto model = std::make_shared<LinearModel>(std::vector<double>(k, 0.0), 0.0);
  auto sync = [&] {
    *model = LinearModel(std::vector<double>(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(k)),
                         params[k]);
  };
  auto score_grad = [&](ConstVec x, const ScaleFn& scale_of, std::vector<double>& g) {
    const double s = vec::dot(std::span<const double>(params).first(k), x) + params[k];
    const double scale = scale_of(s);
    for (std::size_t i = 0; i < k; ++i) g[i] += scale * x[i];
    g[k] += scale;
    return s;
  };
  TrainReport report = run_sgd(data, cfg, *model, params, sync, score_grad, rng);
  return {model, report};
}

double accuracy(const Classifier& c, const Dataset& data) {
  if (data.rows.empty()) throw Error("empty-dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) correct += c.decide(data.rows[i]) == data.labels[i];
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace wrckit
