#include "wrckit/evalharness/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "wrckit/core/error.hpp"
#include "wrckit/core/rng.hpp"

namespace wrckit {
namespace {

Dataset two_feature(const std::string& name) {
  Dataset ds;
  ds.name = name;
  ds.feature_names = {"x0", "x1"};
  return ds;
}

void require_rows(std::size_t n) {
  if (n < 2) throw Error("invalid-config", "synthetic sets need at least two rows");
}

}  // namespace

Dataset make_two_moons(std::size_t n, double noise, std::uint64_t seed) {
  require_rows(n);
  Rng rng(RngHandle{seed, 0x4d4f4f4e});
  Dataset ds = two_feature("two-moons");
  for (std::size_t i = 0; i < n; ++i) {
    const bool upper = i % 2 == 0;
    const double t = std::numbers::pi * rng.uniform();
    double x = upper ? std::cos(t) : 1.0 - std::cos(t);
    double y = upper ? std::sin(t) : 0.5 - std::sin(t);
    x += noise * rng.normal();
    y += noise * rng.normal();
    ds.rows.push_back({x, y});
    ds.labels.push_back(upper ? 1 : -1);
  }
  return ds;
}

Dataset make_circles(std::size_t n, double noise, double factor, std::uint64_t seed) {
  require_rows(n);
  if (!(factor > 0.0 && factor < 1.0)) throw Error("invalid-config", "circle factor must be in (0,1)");
  Rng rng(RngHandle{seed, 0x434952});
  Dataset ds = two_feature("circles");
  for (std::size_t i = 0; i < n; ++i) {
    const bool inner = i % 2 == 0;
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    const double rad = inner ? factor : 1.0;
    ds.rows.push_back({rad * std::cos(t) + noise * rng.normal(), rad * std::sin(t) + noise * rng.normal()});
    ds.labels.push_back(inner ? 1 : -1);
  }
  return ds;
}

Dataset make_xor_blobs(std::size_t n, double spread, std::uint64_t seed) {
  require_rows(n);
  Rng rng(RngHandle{seed, 0x584f52});
  Dataset ds = two_feature("xor");
  for (std::size_t i = 0; i < n; ++i) {
    const int q = static_cast<int>(i % 4);
    const double cx = (q & 1) ? 1.0 : -1.0;
    const double cy = (q & 2) ? 1.0 : -1.0;
    ds.rows.push_back({cx + spread * rng.normal(), cy + spread * rng.normal()});
    ds.labels.push_back(cx * cy > 0 ? 1 : -1);
  }
  return ds;
}

Dataset make_linear_separable(std::size_t n, std::size_t k, double margin, std::uint64_t seed) {
  require_rows(n);
  if (k < 1) throw Error("invalid-config", "dimension must be positive");
  Rng rng(RngHandle{seed, 0x4c494e});
  Dataset ds;
  ds.name = "linear";
  for (std::size_t j = 0; j < k; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  // Normal (1, -1, 1, ...)/sqrt(K) through the cube center.
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  while (ds.rows.size() < n) {
    Instance x(k);
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      x[j] = rng.uniform();
      s += ((j % 2 == 0) ? 1.0 : -1.0) * (x[j] - 0.5) * scale;
    }
    if (std::abs(s) < margin / 2.0) continue;
    ds.rows.push_back(std::move(x));
    ds.labels.push_back(s >= 0.0 ? 1 : -1);
  }
  return ds;
}

std::vector<std::string> synthetic_names() { return {"two-moons", "circles", "xor", "linear"}; }

Dataset make_synthetic(const std::string& name, std::size_t n, std::uint64_t seed) {
  if (name == "two-moons") return make_two_moons(n, 0.15, seed);
  if (name == "circles") return make_circles(n, 0.08, 0.5, seed);
  if (name == "xor") return make_xor_blobs(n, 0.45, seed);
  if (name == "linear") return make_linear_separable(n, 2, 0.05, seed);
  throw Error("unknown-dataset", name);
}

}  // namespace wrckit
