#include "wrckit/models/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "wrckit/core/error.hpp"

namespace wrckit {

FiniteDiffReport finite_diff_check(const Classifier& c, ConstVec x, double h) {
  if (!c.differentiable()) throw Error("not-differentiable", c.kind());
  if (!(h > 0.0)) throw Error("invalid-argument", "step must be positive");
  vec::require_same_dim(x.size(), c.dim(), "finite_diff_check");
  const Instance g = c.gradient(x);
  FiniteDiffReport report;
  Instance probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = c.score(probe);
    probe[i] = x[i] - h;
    const double down = c.score(probe);
    probe[i] = x[i];
    const double fd = (up - down) / (2.0 * h);
    report.max_relative_error =
        std::max(report.max_relative_error, std::abs(g[i] - fd) / (std::abs(g[i]) + 1e-12));
  }
  report.kink_adjacent = c.kink_adjacent(x, h);
  return report;
}

}  // namespace wrckit
