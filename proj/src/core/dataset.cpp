#include "wrckit/core/dataset.hpp"

#include <cmath>

#include "wrckit/core/error.hpp"

namespace wrckit {

Instance NormalizationRecord::apply(ConstVec raw) const {
  vec::require_same_dim(raw.size(), min.size(), "normalize");
  Instance out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = constant[i] ? 0.0 : (raw[i] - min[i]) / (max[i] - min[i]);
  }
  return out;
}

Instance NormalizationRecord::invert(ConstVec normalized) const {
  vec::require_same_dim(normalized.size(), min.size(), "denormalize");
  Instance out(normalized.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    out[i] = constant[i] ? min[i] : min[i] + normalized[i] * (max[i] - min[i]);
  }
  return out;
}

void Dataset::validate() const {
  if (rows.empty()) throw Error("empty-dataset", name);
  if (labels.size() != rows.size()) throw Error("invalid-dataset", "label count differs from row count");
  const std::size_t k = rows.front().size();
  if (k == 0) throw Error("invalid-dataset", "zero features");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k) throw Error("dimension-mismatch", "row " + std::to_string(i));
    for (double v : rows[i]) {
      if (!std::isfinite(v)) throw Error("invalid-dataset", "non-finite value in row " + std::to_string(i));
    }
    if (labels[i] != 1 && labels[i] != -1) throw Error("invalid-dataset", "labels must be -1 or +1");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.name = name;
  out.feature_names = feature_names;
  out.normalization = normalization;
  out.rows.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.rows.push_back(rows.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

}  // namespace wrckit
