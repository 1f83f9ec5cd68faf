#include "wrckit/core/phi.hpp"

#include <cmath>

#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"

namespace wrckit {

PhiFunction::PhiFunction(PhiKind kind, double param) : kind_(kind), param_(param) {
  if (!(param > 0.0) || !std::isfinite(param)) throw Error("invalid-phi", "parameter must be positive");
}

PhiFunction PhiFunction::inverse_shifted(double epsilon) {
  return PhiFunction(PhiKind::InverseShifted, epsilon);
}

PhiFunction PhiFunction::exponential_decay(double rate) {
  return PhiFunction(PhiKind::ExponentialDecay, rate);
}

double PhiFunction::operator()(double t) const {
  if (t < 0.0) throw Error("negative-distance");
  if (kind_ == PhiKind::InverseShifted) return 1.0 / (t + param_);
  return std::exp(-param_ * t);
}

std::string PhiFunction::describe() const {
  if (kind_ == PhiKind::InverseShifted) return "inverse-shifted(epsilon=" + format_double(param_) + ")";
  return "exponential-decay(rate=" + format_double(param_) + ")";
}

double phi_eval(const PhiFunction& p, double t) { return p(t); }

}  // namespace wrckit
