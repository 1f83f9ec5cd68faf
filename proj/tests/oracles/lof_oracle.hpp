#pragma once

// Direct O(n^2) Local Outlier Factor, written straight from the definition:
//   k-distance(o)   distance to the k-th nearest other reference point
//   reach(p, o)     max(k-distance(o), d(p, o))
//   lrd(p)          1 / mean_{o in N_k(p)} reach(p, o)
//   LOF(p)          mean_{o in N_k(p)} lrd(o) / lrd(p)
// Neighbour sets are exactly k points ordered by (distance, index).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline std::vector<std::size_t> knn(const std::vector<std::vector<double>>& ref, const std::vector<double>& p,
                                    std::size_t k, std::size_t skip) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (i != skip) all.emplace_back(euclid(p, ref[i]), i);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
  return out;
}

inline std::vector<double> lof(const std::vector<std::vector<double>>& ref,
                               const std::vector<std::vector<double>>& queries, std::size_t k,
                               double floor = 1e-12) {
  const std::size_t n = ref.size();
  std::vector<std::vector<std::size_t>> nbrs(n);
  std::vector<double> kdist(n);
  for (std::size_t i = 0; i < n; ++i) {
    nbrs[i] = knn(ref, ref[i], k, i);
    kdist[i] = euclid(ref[i], ref[nbrs[i].back()]);
  }
  auto lrd_of = [&](const std::vector<double>& p, const std::vector<std::size_t>& nb) {
    double reach = 0.0;
    for (std::size_t o : nb) reach += std::max(kdist[o], euclid(p, ref[o]));
    reach /= static_cast<double>(nb.size());
    return 1.0 / std::max(reach, floor);
  };
  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) lrd[i] = lrd_of(ref[i], nbrs[i]);
  std::vector<double> out;
  for (const auto& q : queries) {
    const auto nb = knn(ref, q, k, n);
    double sum = 0.0;
    for (std::size_t o : nb) sum += lrd[o];
    out.push_back(sum / static_cast<double>(nb.size()) / lrd_of(q, nb));
  }
  return out;
}

}  // namespace oracle
