#pragma once

#include <string>

namespace wrckit {

enum class PhiKind { InverseShifted, ExponentialDecay };

// Positive, strictly decreasing weight on distances.
//   inverse-shifted:   phi(t) = 1 / (t + epsilon)
//   exponential-decay: phi(t) = exp(-rate * t)
class PhiFunction {
 public:
  PhiFunction() = default;
  static PhiFunction inverse_shifted(double epsilon = 1e-6);
  static PhiFunction exponential_decay(double rate);

  // Throws Error("negative-distance") for t < 0.
  double operator()(double t) const;

  PhiKind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string describe() const;

 private:
  PhiFunction(PhiKind kind, double param);

  PhiKind kind_ = PhiKind::InverseShifted;
  double param_ = 1e-6;
};

double phi_eval(const PhiFunction& p, double t);

}  // namespace wrckit
