#include "wrckit/core/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wrckit/core/error.hpp"

namespace wrckit {
namespace {

Instance uniform_in_ball(ConstVec center, double r, Rng& rng) {
  const std::size_t k = center.size();
  Instance dir(k);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      n2 += v * v;
    }
  } while (n2 == 0.0);
  const double scale = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(k)) / std::sqrt(n2);
  Instance y(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = center[i] + scale * dir[i];
  return y;
}

// Reflect coordinates through cube faces that the center sits on.
void fold_onto_faces(ConstVec center, Instance& y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (center[i] <= 0.0 && y[i] < 0.0) y[i] = 2.0 * center[i] - y[i];
    if (center[i] >= 1.0 && y[i] > 1.0) y[i] = 2.0 * center[i] - y[i];
  }
}

}  // namespace

std::vector<Instance> sample_uniform_ball(ConstVec center, double r, std::size_t k, Rng& rng,
                                          std::size_t max_rejects) {
  if (!(r > 0.0)) throw Error("invalid-radius");
  std::vector<Instance> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    std::size_t attempts = 0;
    while (true) {
      Instance y = uniform_in_ball(center, r, rng);
      fold_onto_faces(center, y);
      if (vec::in_unit_cube(y)) {
        out.push_back(std::move(y));
        break;
      }
      if (++attempts >= max_rejects) throw Error("rejection-budget-exhausted", "uniform ball sampling");
    }
  }
  return out;
}

std::vector<Instance> sample_uniform_ball(ConstVec center, double r, std::size_t k,
                                          const RngHandle& handle, std::size_t max_rejects) {
  Rng rng(handle);
  return sample_uniform_ball(center, r, k, rng, max_rejects);
}

Instance sample_gaussian_in_ball(ConstVec anchor, ConstVec mean, double sigma, double r,
                                 std::size_t max_rejects, Rng& rng) {
  if (!(r > 0.0)) throw Error("invalid-radius");
  if (!(sigma > 0.0)) throw Error("invalid-sigma");
  vec::require_same_dim(anchor.size(), mean.size(), "sample_gaussian_in_ball");
  Instance x(mean.size());
  for (std::size_t attempt = 0; attempt < max_rejects; ++attempt) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = mean[i] + sigma * rng.normal();
      d2 += (x[i] - anchor[i]) * (x[i] - anchor[i]);
    }
    if (d2 <= r * r && vec::in_unit_cube(x)) return x;
  }
  throw Error("rejection-budget-exhausted",
              std::to_string(max_rejects) + " consecutive draws fell outside the ball");
}

Instance sample_gaussian_in_ball(ConstVec anchor, ConstVec mean, double sigma, double r,
                                 std::size_t max_rejects, const RngHandle& handle) {
  Rng rng(handle);
  return sample_gaussian_in_ball(anchor, mean, sigma, r, max_rejects, rng);
}

double estimate_ball_volume(ConstVec center, double r, std::size_t samples, Rng& rng) {
  if (!(r > 0.0)) throw Error("invalid-radius");
  if (samples == 0) throw Error("invalid-argument", "volume samples must be positive");
  const std::size_t k = center.size();
  std::vector<double> lo(k), hi(k);
  double box = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = std::max(0.0, center[i] - r);
    hi[i] = std::min(1.0, center[i] + r);
    box *= hi[i] - lo[i];
  }
  if (box == 0.0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double y = rng.uniform(lo[i], hi[i]);
      d2 += (y - center[i]) * (y - center[i]);
    }
    if (d2 <= r * r) ++hits;
  }
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

double unit_ball_volume(std::size_t k) {
  const double half = static_cast<double>(k) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

}  // namespace wrckit
