#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wrckit/core/vec.hpp"

namespace wrckit {

struct NormalizationRecord {
  std::vector<double> min;
  std::vector<double> max;
  std::vector<bool> constant;  // feature had zero range; mapped to 0.0

  bool empty() const { return min.empty(); }
  Instance apply(ConstVec raw) const;
  Instance invert(ConstVec normalized) const;
};

// Labeled tabular data. Labels are in {-1, +1}.
struct Dataset {
  std::string name;
  std::vector<Instance> rows;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  NormalizationRecord normalization;
  std::size_t dropped_rows = 0;

  std::size_t size() const { return rows.size(); }
  std::size_t dim() const { return rows.empty() ? feature_names.size() : rows.front().size(); }
  // Throws Error("empty-dataset") / Error("invalid-dataset") when invariants fail.
  void validate() const;
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

}  // namespace wrckit
