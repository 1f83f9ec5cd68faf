#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "wrckit/core/dataset.hpp"
#include "wrckit/models/classifier.hpp"
#include "wrckit/models/mlp.hpp"

namespace wrckit {

// Mini-batch SGD on the logistic loss log(1 + exp(-y * score)).
struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  double accuracy_threshold = 0.70;
  double validation_fraction = 0.2;
  std::size_t hidden1 = 32;
  std::size_t hidden2 = 32;

  void validate() const;
};

struct TrainReport {
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  std::size_t epochs_run = 0;
  double final_loss = 0.0;
  bool below_threshold = false;
  bool degenerate = false;  // all labels identical
};

template <class Model>
struct Trained {
  std::shared_ptr<Model> model;
  TrainReport report;
};

// Throws Error("training-diverged") with the epoch index if the loss stops
// being finite; Error("empty-dataset") / Error("invalid-dataset") on bad input.
Trained<MlpModel> train_mlp(const Dataset& data, const TrainConfig& cfg);
Trained<LinearModel> train_logistic(const Dataset& data, const TrainConfig& cfg);

double accuracy(const Classifier& c, const Dataset& data);

}  // namespace wrckit
