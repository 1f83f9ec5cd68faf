#pragma once

#include <cstddef>
#include <vector>

#include "wrckit/core/rng.hpp"
#include "wrckit/core/vec.hpp"

namespace wrckit {

inline constexpr std::size_t kDefaultMaxRejects = 10000;

// k points uniform on B(center, r) ∩ [0,1]^K (Euclidean ball).
//
// Uniform-in-ball draws use a normalized Gaussian direction scaled by
// r * U^(1/K). Coordinates whose center lies on a cube face are folded back
// into the cube (exact, since the ball is symmetric about that face); any
// remaining exits are rejected. Throws Error("invalid-radius") for r <= 0 and
// Error("rejection-budget-exhausted") if a single point needs more than
// max_rejects attempts.
std::vector<Instance> sample_uniform_ball(ConstVec center, double r, std::size_t k, Rng& rng,
                                          std::size_t max_rejects = kDefaultMaxRejects);
std::vector<Instance> sample_uniform_ball(ConstVec center, double r, std::size_t k,
                                          const RngHandle& handle,
                                          std::size_t max_rejects = kDefaultMaxRejects);

// One draw of N(mean, sigma^2 I) conditioned on B(anchor, r) ∩ [0,1]^K by
// rejection. Throws Error("rejection-budget-exhausted") after max_rejects
// consecutive misses.
Instance sample_gaussian_in_ball(ConstVec anchor, ConstVec mean, double sigma, double r,
                                 std::size_t max_rejects, Rng& rng);
Instance sample_gaussian_in_ball(ConstVec anchor, ConstVec mean, double sigma, double r,
                                 std::size_t max_rejects, const RngHandle& handle);

// Lebesgue volume of B(center, r) ∩ [0,1]^K by hit ratio inside the clipped
// bounding box of the ball.
double estimate_ball_volume(ConstVec center, double r, std::size_t samples, Rng& rng);

// Volume of the Euclidean unit ball in dimension k.
double unit_ball_volume(std::size_t k);

}  // namespace wrckit
