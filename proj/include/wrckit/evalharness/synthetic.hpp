#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wrckit/core/dataset.hpp"

namespace wrckit {

// Raw (unnormalized) two-feature benchmark sets; labels +1/-1.
Dataset make_two_moons(std::size_t n, double noise, std::uint64_t seed);
Dataset make_circles(std::size_t n, double noise, double factor, std::uint64_t seed);
Dataset make_xor_blobs(std::size_t n, double spread, std::uint64_t seed);
// Uniform on [0,1]^K labelled by a fixed hyperplane through the center, with
// a label-free margin of width `margin` removed.
Dataset make_linear_separable(std::size_t n, std::size_t k, double margin, std::uint64_t seed);

std::vector<std::string> synthetic_names();
// Default-sized set by name ("two-moons", "circles", "xor", "linear").
Dataset make_synthetic(const std::string& name, std::size_t n, std::uint64_t seed);

}  // namespace wrckit
