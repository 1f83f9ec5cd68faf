#include "wrckit/models/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "wrckit/core/error.hpp"

namespace wrckit {

MlpModel::MlpModel(std::size_t inputs, std::size_t hidden1, std::size_t hidden2)
    : inputs_(inputs),
      h1_(hidden1),
      h2_(hidden2),
      w1_(hidden1 * inputs, 0.0),
      b1_(hidden1, 0.0),
      w2_(hidden2 * hidden1, 0.0),
      b2_(hidden2, 0.0),
      w3_(hidden2, 0.0) {
  if (inputs == 0 || hidden1 == 0 || hidden2 == 0) throw Error("invalid-model", "zero layer width");
}

void MlpModel::initialize(Rng& rng) {
  auto fill = [&rng](std::vector<double>& w, std::size_t fan_in) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& v : w) v = rng.uniform(-limit, limit);
  };
  fill(w1_, inputs_);
  fill(w2_, h1_);
  fill(w3_, h2_);
  std::fill(b1_.begin(), b1_.end(), 0.0);
  std::fill(b2_.begin(), b2_.end(), 0.0);
  b3_ = 0.0;
}

void MlpModel::forward(ConstVec x, Activations& act) const {
  vec::require_same_dim(x.size(), inputs_, "mlp input");
  act.z1.assign(h1_, 0.0);
  act.a1.assign(h1_, 0.0);
  for (std::size_t j = 0; j < h1_; ++j) {
    double s = b1_[j];
    const double* row = &w1_[j * inputs_];
    for (std::size_t i = 0; i < inputs_; ++i) s += row[i] * x[i];
    act.z1[j] = s;
    act.a1[j] = s > 0.0 ? s : 0.0;
  }
  act.z2.assign(h2_, 0.0);
  act.a2.assign(h2_, 0.0);
  for (std::size_t j = 0; j < h2_; ++j) {
    double s = b2_[j];
    const double* row = &w2_[j * h1_];
    for (std::size_t i = 0; i < h1_; ++i) s += row[i] * act.a1[i];
    act.z2[j] = s;
    act.a2[j] = s > 0.0 ? s : 0.0;
  }
  double out = b3_;
  for (std::size_t j = 0; j < h2_; ++j) out += w3_[j] * act.a2[j];
  act.out = out;
}

double MlpModel::score(ConstVec x) const {
  Activations act;
  forward(x, act);
  return act.out;
}

Instance MlpModel::gradient(ConstVec x) const {
  Activations act;
  forward(x, act);
  std::vector<double> d2(h2_);
  for (std::size_t j = 0; j < h2_; ++j) d2[j] = act.z2[j] > 0.0 ? w3_[j] : 0.0;
  std::vector<double> d1(h1_, 0.0);
  for (std::size_t j = 0; j < h2_; ++j) {
    if (d2[j] == 0.0) continue;
    const double* row = &w2_[j * h1_];
    for (std::size_t i = 0; i < h1_; ++i) d1[i] += d2[j] * row[i];
  }
  Instance g(inputs_, 0.0);
  for (std::size_t j = 0; j < h1_; ++j) {
    if (act.z1[j] <= 0.0) continue;
    const double* row = &w1_[j * inputs_];
    for (std::size_t i = 0; i < inputs_; ++i) g[i] += d1[j] * row[i];
  }
  return g;
}

bool MlpModel::kink_adjacent(ConstVec x, double h) const {
  Activations base, probe;
  forward(x, base);
  Instance y(x.begin(), x.end());
  for (std::size_t i = 0; i < inputs_; ++i) {
    for (double s : {-h, h}) {
      y[i] = x[i] + s;
      forward(y, probe);
      for (std::size_t j = 0; j < h1_; ++j) {
        if ((base.z1[j] > 0.0) != (probe.z1[j] > 0.0)) return true;
      }
      for (std::size_t j = 0; j < h2_; ++j) {
        if ((base.z2[j] > 0.0) != (probe.z2[j] > 0.0)) return true;
      }
    }
    y[i] = x[i];
  }
  return false;
}

std::size_t MlpModel::parameter_count() const {
  return w1_.size() + b1_.size() + w2_.size() + b2_.size() + w3_.size() + 1;
}

std::vector<double> MlpModel::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  p.insert(p.end(), w1_.begin(), w1_.end());
  p.insert(p.end(), b1_.begin(), b1_.end());
  p.insert(p.end(), w2_.begin(), w2_.end());
  p.insert(p.end(), b2_.begin(), b2_.end());
  p.insert(p.end(), w3_.begin(), w3_.end());
  p.push_back(b3_);
  return p;
}

void MlpModel::set_parameters(const std::vector<double>& p) {
  if (p.size() != parameter_count()) {
    throw Error("invalid-model", "expected " + std::to_string(parameter_count()) + " parameters, got " +
                                     std::to_string(p.size()));
  }
  auto it = p.begin();
  auto take = [&it](std::vector<double>& dst) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
    it += static_cast<std::ptrdiff_t>(dst.size());
  };
  take(w1_);
  take(b1_);
  take(w2_);
  take(b2_);
  take(w3_);
  b3_ = *it;
}

double MlpModel::accumulate_parameter_gradient(ConstVec x, const std::function<double(double)>& scale_of,
                                               std::vector<double>& grad) const {
  Activations act;
  forward(x, act);
  const double scale = scale_of(act.out);
  const std::size_t o_w1 = 0;
  const std::size_t o_b1 = o_w1 + w1_.size();
  const std::size_t o_w2 = o_b1 + b1_.size();
  const std::size_t o_b2 = o_w2 + w2_.size();
  const std::size_t o_w3 = o_b2 + b2_.size();
  const std::size_t o_b3 = o_w3 + w3_.size();

  grad[o_b3] += scale;
  std::vector<double> d2(h2_, 0.0);
  for (std::size_t j = 0; j < h2_; ++j) {
    grad[o_w3 + j] += scale * act.a2[j];
    d2[j] = act.z2[j] > 0.0 ? scale * w3_[j] : 0.0;
  }
  std::vector<double> d1(h1_, 0.0);
  for (std::size_t j = 0; j < h2_; ++j) {
    if (d2[j] == 0.0) continue;
    grad[o_b2 + j] += d2[j];
    double* g = &grad[o_w2 + j * h1_];
    const double* row = &w2_[j * h1_];
    for (std::size_t i = 0; i < h1_; ++i) {
      g[i] += d2[j] * act.a1[i];
      d1[i] += d2[j] * row[i];
    }
  }
  for (std::size_t j = 0; j < h1_; ++j) {
    if (act.z1[j] <= 0.0 || d1[j] == 0.0) continue;
    grad[o_b1 + j] += d1[j];
    double* g = &grad[o_w1 + j * inputs_];
    for (std::size_t i = 0; i < inputs_; ++i) g[i] += d1[j] * x[i];
  }
  return act.out;
}

}  // namespace wrckit
