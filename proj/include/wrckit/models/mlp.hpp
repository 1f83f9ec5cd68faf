#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wrckit/core/rng.hpp"
#include "wrckit/models/classifier.hpp"

namespace wrckit {

// Fully connected K -> H1 -> H2 -> 1 network, ReLU on the hidden layers and
// identity on the output. Weights are row-major (out x in).
class MlpModel final : public Classifier {
 public:
  MlpModel(std::size_t inputs, std::size_t hidden1, std::size_t hidden2);

  // He-uniform weights, zero biases.
  void initialize(Rng& rng);

  std::size_t dim() const override { return inputs_; }
  double score(ConstVec x) const override;
  std::string kind() const override { return "mlp"; }
  bool differentiable() const override { return true; }
  Instance gradient(ConstVec x) const override;
  bool kink_adjacent(ConstVec x, double h) const override;

  std::size_t hidden1() const { return h1_; }
  std::size_t hidden2() const { return h2_; }

  // Flat parameter vector in file order: W1, b1, W2, b2, w3, b3.
  std::vector<double> parameters() const;
  void set_parameters(const std::vector<double>& params);
  std::size_t parameter_count() const;

  // Runs a forward pass, then adds scale(score) * d(score)/d(theta) into grad
  // (same layout as parameters()). Returns the score.
  double accumulate_parameter_gradient(ConstVec x, const std::function<double(double)>& scale,
                                       std::vector<double>& grad) const;

 private:
  struct Activations {
    std::vector<double> z1, a1, z2, a2;
    double out = 0.0;
  };
  void forward(ConstVec x, Activations& act) const;

  std::size_t inputs_, h1_, h2_;
  std::vector<double> w1_, b1_, w2_, b2_, w3_;
  double b3_ = 0.0;
};

}  // namespace wrckit
