#include "wrckit/core/vec.hpp"

#include <algorithm>
#include <cmath>

#include "wrckit/core/error.hpp"

namespace wrckit::vec {

double dot(ConstVec a, ConstVec b) {
  require_same_dim(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(ConstVec a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double norm_inf(ConstVec a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Instance sub(ConstVec a, ConstVec b) {
  require_same_dim(a.size(), b.size(), "sub");
  Instance out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Instance add_scaled(ConstVec a, double s, ConstVec b) {
  require_same_dim(a.size(), b.size(), "add_scaled");
  Instance out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

Instance lerp(ConstVec a, ConstVec b, double t) {
  require_same_dim(a.size(), b.size(), "lerp");
  Instance out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

void clip_unit(Instance& x) {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
}

bool in_unit_cube(ConstVec x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

bool lex_less(ConstVec a, ConstVec b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error("dimension-mismatch",
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace wrckit::vec
