#include "wrckit/evalharness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "wrckit/core/error.hpp"

namespace wrckit {
namespace {

double squared_distance(ConstVec a, ConstVec b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

using Neighbor = std::pair<double, std::size_t>;  // (squared distance, index)

class KdTree {
 public:
  explicit KdTree(const std::vector<Instance>& pts) : pts_(pts), order_(pts.size()) {
    std::iota(order_.begin(), order_.end(), 0);
    if (!pts.empty()) root_ = build(0, pts.size());
  }

  // k nearest points to q, ascending by (distance, index); `skip` is excluded.
  std::vector<Neighbor> nearest(ConstVec q, std::size_t k, std::size_t skip) const {
    std::priority_queue<Neighbor> heap;  // max-heap: worst neighbour on top
    search(root_, q, k, skip, heap);
    std::vector<Neighbor> out(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
      out[i] = heap.top();
      heap.pop();
    }
    return out;
  }

 private:
  static constexpr std::size_t kLeafSize = 8;
  struct Node {
    std::size_t begin = 0, end = 0;
    std::size_t dim = 0;
    double split = 0.0;
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) return id;
    const std::size_t k = pts_[order_[begin]].size();
    std::size_t best_dim = 0;
    double best_spread = -1.0;
    for (std::size_t d = 0; d < k; ++d) {
      double lo = pts_[order_[begin]][d];
      double hi = lo;
      for (std::size_t i = begin; i < end; ++i) {
        lo = std::min(lo, pts_[order_[i]][d]);
        hi = std::max(hi, pts_[order_[i]][d]);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = d;
      }
    }
    if (best_spread <= 0.0) return id;  // all points coincide
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return pts_[a][best_dim] < pts_[b][best_dim]; });
    const double split = pts_[order_[mid]][best_dim];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].dim = best_dim;
    nodes_[static_cast<std::size_t>(id)].split = split;
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void search(int id, ConstVec q, std::size_t k, std::size_t skip, std::priority_queue<Neighbor>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        if (idx == skip) continue;
        const Neighbor cand{squared_distance(q, pts_[idx]), idx};
        if (heap.size() < k) {
          heap.push(cand);
        } else if (cand < heap.top()) {
          heap.pop();
          heap.push(cand);
        }
      }
      return;
    }
    // Left child holds coordinates <= split, right child >= split.
    const double diff = q[node.dim] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, q, k, skip, heap);
    if (heap.size() < k || diff * diff <= heap.top().first) search(far, q, k, skip, heap);
  }

  const std::vector<Instance>& pts_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

CostSummary cost(const Metric& m, const std::vector<CounterfactualResult>& results) {
  std::vector<double> d;
  CostSummary out;
  for (const auto& r : results) {
    if (!r.valid) {
      ++out.excluded;
      continue;
    }
    d.push_back(m(r.source, r.counterfactual));
  }
  if (d.empty()) throw Error("no-valid-results", "cost needs at least one valid counterfactual");
  const Summary s = summarize(d);
  out.mean = s.mean;
  out.std = s.std;
  out.included = d.size();
  return out;
}

double validity(const Classifier& c, const std::vector<CounterfactualResult>& results) {
  if (results.empty()) throw Error("empty-results");
  std::size_t flipped = 0;
  for (const auto& r : results) {
    if (c.decide(r.counterfactual) != c.decide(r.source)) ++flipped;
  }
  return 100.0 * static_cast<double>(flipped) / static_cast<double>(results.size());
}

LofResult lof_scores(const std::vector<Instance>& reference, const std::vector<Instance>& points, std::size_t k,
                     double inlier_threshold) {
  if (k < 1) throw Error("invalid-config", "LOF needs k >= 1");
  if (reference.size() <= k) throw Error("invalid-config", "LOF reference must have more than k rows");
  const std::size_t dim = reference.front().size();
  for (const auto& r : reference) vec::require_same_dim(r.size(), dim, "LOF reference");
  for (const auto& p : points) vec::require_same_dim(p.size(), dim, "LOF query");

  LofResult out;
  const KdTree tree(reference);
  const std::size_t none = reference.size();
  auto local_density = [&](const std::vector<Neighbor>& nbrs, const std::vector<double>& kdist) {
    double reach = 0.0;
    for (const auto& [dsq, idx] : nbrs) reach += std::max(kdist[idx], std::sqrt(dsq));
    reach /= static_cast<double>(nbrs.size());
    if (reach < kLofDensityFloor) {
      out.floored = true;
      reach = kLofDensityFloor;
    }
    return 1.0 / reach;
  };

  std::vector<std::vector<Neighbor>> ref_nbrs(reference.size());
  std::vector<double> kdist(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    ref_nbrs[i] = tree.nearest(reference[i], k, i);
    kdist[i] = std::sqrt(ref_nbrs[i].back().first);
  }
  std::vector<double> lrd(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) lrd[i] = local_density(ref_nbrs[i], kdist);

  out.scores.reserve(points.size());
  for (const auto& p : points) {
    const auto nbrs = tree.nearest(p, k, none);
    const double own = local_density(nbrs, kdist);
    double ratio = 0.0;
    for (const auto& nb : nbrs) ratio += lrd[nb.second];
    const double score = ratio / static_cast<double>(nbrs.size()) / own;
    out.scores.push_back(score);
    if (score <= inlier_threshold) ++out.inliers;
  }
  out.inlier_fraction =
      points.empty() ? 0.0 : static_cast<double>(out.inliers) / static_cast<double>(points.size());
  return out;
}

}  // namespace wrckit
