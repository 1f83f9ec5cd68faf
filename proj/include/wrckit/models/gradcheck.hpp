#pragma once

#include "wrckit/models/classifier.hpp"

namespace wrckit {

struct FiniteDiffReport {
  double max_relative_error = 0.0;
  bool kink_adjacent = false;
};

// max_i |g_i - fd_i| / (|g_i| + 1e-12) with central differences of step h.
// Throws Error("not-differentiable") for classifiers without gradients.
FiniteDiffReport finite_diff_check(const Classifier& c, ConstVec x, double h);

}  // namespace wrckit
