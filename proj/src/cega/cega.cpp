#include "wrckit/cega/cega.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <optional>

#include "wrckit/core/error.hpp"

namespace wrckit {
namespace {

constexpr double kBisectionTolerance = 1e-9;
constexpr double kFiniteDiffStep = 1e-6;
constexpr std::size_t kStallWindow = 25;
constexpr double kStepDecay = 0.6;
constexpr double kMinStep = 1e-10;
constexpr double kLambdaGrowthCap = 1024.0;

struct Candidate {
  Instance point;
  double strength = 0.0;
  double objective = 0.0;
  bool clipped = false;
};

bool better(const Candidate& a, const std::optional<Candidate>& b) {
  if (!b) return true;
  if (a.objective != b->objective) return a.objective < b->objective;
  return vec::lex_less(a.point, b->point);
}

// Shrinks [lo, hi] along the segment until the endpoints are within the
// coordinate tolerance; decide(lo) == side and decide(hi) != side throughout.
std::pair<Instance, Instance> bisect(const Classifier& c, int side, Instance lo, Instance hi) {
  for (int i = 0; i < 200 && vec::norm_inf(vec::sub(hi, lo)) > kBisectionTolerance; ++i) {
    Instance mid = vec::lerp(lo, hi, 0.5);
    if (c.decide(mid) == side) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return {std::move(lo), std::move(hi)};
}

// Largest t with x + t*v inside the unit cube.
double ray_exit(ConstVec x, ConstVec v) {
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (v[i] > 0.0) t = std::min(t, (1.0 - x[i]) / v[i]);
    if (v[i] < 0.0) t = std::min(t, -x[i] / v[i]);
  }
  return t;
}

class Search {
 public:
  Search(const CegaConfig& cfg, const Classifier& c, ConstVec x)
      : cfg_(cfg), c_(c), x_(x.begin(), x.end()), side_(c.decide(x)) {}

  int side() const { return side_; }
  const Instance& x() const { return x_; }

  void set_prototype(Instance proto, double weight) {
    proto_ = std::move(proto);
    proto_weight_ = weight;
  }

  double objective(ConstVec z) const {
    double v = cfg_.metric(x_, z);
    if (proto_weight_ > 0.0) {
      const Instance diff = vec::sub(z, proto_);
      v += proto_weight_ * vec::dot(diff, diff);
    }
    return v;
  }

  // Bracket (inside, outside) around the boundary; `direction` is the segment
  // direction the overshoot follows.
  std::optional<Candidate> finalize(const Instance& inside, const Instance& outside, ConstVec direction) const {
    const double n = vec::norm2(direction);
    if (n == 0.0) return std::nullopt;
    auto [lo, hi] = bisect(c_, side_, inside, outside);
    for (const Instance* base : {&lo, &hi}) {
      Instance p = vec::add_scaled(*base, cfg_.overshoot / n, direction);
      Instance clipped = p;
      vec::clip_unit(clipped);
      if (c_.decide(clipped) == side_) continue;
      Candidate cand;
      cand.clipped = clipped != p;
      cand.point = std::move(clipped);
      cand.strength = cfg_.metric(x_, cand.point);
      cand.objective = objective(cand.point);
      return cand;
    }
    return std::nullopt;
  }

  // Segment x -> target, if target lies on the other side.
  std::optional<Candidate> along_segment(const Instance& target) const {
    if (c_.decide(target) == side_) return std::nullopt;
    return finalize(x_, target, vec::sub(target, x_));
  }

  Instance normal_at(ConstVec p, bool analytic) const {
    if (analytic) return c_.gradient(p);
    Instance g(p.size());
    Instance probe(p.begin(), p.end());
    for (std::size_t i = 0; i < p.size(); ++i) {
      probe[i] = p[i] + kFiniteDiffStep;
      const double up = c_.score(probe);
      probe[i] = p[i] - kFiniteDiffStep;
      const double down = c_.score(probe);
      probe[i] = p[i];
      g[i] = (up - down) / (2.0 * kFiniteDiffStep);
    }
    return g;
  }

  // Re-aims the segment from x at the metric projection of x onto the local
  // tangent plane of the boundary, keeping only strict improvements.
  Candidate refine(Candidate cand, bool analytic, std::size_t& evaluations) const {
    for (std::size_t round = 0; round < cfg_.refine_rounds; ++round) {
      const Instance n = normal_at(cand.point, analytic);
      if (vec::norm2(n) == 0.0) break;
      Instance q;
      try {
        q = cfg_.metric.project_onto_hyperplane(x_, n, cand.point);
      } catch (const Error&) {
        break;
      }
      const Instance step = vec::sub(q, x_);
      if (vec::norm2(step) == 0.0) break;
      // Stay on the ray through q where possible; clipping would bend it.
      const double reach = std::min(2.0, ray_exit(x_, step));
      std::optional<Candidate> next;
      for (double scale : {reach, 1.0 + 0.25 * (reach - 1.0), 1.0 + 0.05 * (reach - 1.0), 2.0}) {
        if (!(scale > 1.0)) continue;
        Instance target = vec::add_scaled(x_, scale, step);
        vec::clip_unit(target);
        ++evaluations;
        next = along_segment(target);
        if (next) break;
      }
      if (!next || !(next->objective < cand.objective)) break;
      cand = std::move(*next);
    }
    return cand;
  }

 private:
  const CegaConfig& cfg_;
  const Classifier& c_;
  Instance x_;
  int side_;
  Instance proto_;
  double proto_weight_ = 0.0;
};

CounterfactualResult make_result(ConstVec x, const std::optional<Candidate>& best, const Classifier& c,
                                 const Metric& metric, std::string generator, std::size_t iterations) {
  CounterfactualResult r;
  r.source.assign(x.begin(), x.end());
  r.generator = std::move(generator);
  r.iterations = iterations;
  if (best) {
    r.counterfactual = best->point;
    r.clipped = best->clipped;
    r.valid = c.decide(r.counterfactual) != c.decide(x);
  }
  if (!r.valid) {
    r.counterfactual = r.source;
    r.clipped = false;
  }
  r.perturbation = vec::sub(r.counterfactual, r.source);
  r.strength = r.valid ? metric(r.source, r.counterfactual) : std::numeric_limits<double>::infinity();
  return r;
}

CounterfactualResult descend(const CegaConfig& cfg, const Classifier& c, ConstVec x, Rng& rng,
                             std::optional<Instance> prototype) {
  const bool proto_kind = cfg.kind == CegaKind::Prototype;
  if (!c.differentiable()) {
    throw Error(proto_kind ? "prototype-generator-needs-differentiable" : "gradient-generator-needs-differentiable");
  }
  Search search(cfg, c, x);
  const double theta = prototype ? cfg.prototype_weight : 0.0;
  if (prototype && theta > 0.0) search.set_prototype(*prototype, theta);

  const int side = search.side();
  const double sign = static_cast<double>(side);
  Instance z = search.x();
  double lambda = cfg.lambda;
  const double lambda_cap = cfg.lambda * kLambdaGrowthCap;
  double eta = cfg.step_size;
  std::optional<Candidate> best;
  std::size_t since_cross = 0;
  std::size_t it = 0;

  for (; it < cfg.max_iterations; ++it) {
    const bool same_side = c.decide(z) == side;
    Instance g = cfg.metric.gradient(x, z);
    if (same_side && lambda > 0.0) {
      const Instance gs = c.gradient(z);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += lambda * sign * gs[i];
    }
    if (theta > 0.0) {
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * theta * (z[i] - (*prototype)[i]);
    }
    double gn = vec::norm2(g);
    if (gn < 1e-14) {
      // Nothing pulls z anywhere: with no hinge weight the trade-off has
      // degenerated to "stay at x"; otherwise escape the flat point.
      if (lambda == 0.0 && theta == 0.0) break;
      for (double& v : g) v = rng.normal();
      gn = vec::norm2(g);
    }
    Instance next = vec::add_scaled(z, -eta / gn, g);
    vec::clip_unit(next);
    const bool crossed = (c.decide(next) == side) != same_side;
    if (crossed) {
      const Instance& inside = same_side ? z : next;
      const Instance& outside = same_side ? next : z;
      if (auto cand = search.finalize(inside, outside, vec::sub(outside, inside)); cand && better(*cand, best)) {
        best = std::move(cand);
      }
      since_cross = 0;
      eta *= kStepDecay;
      if (eta < kMinStep) {
        ++it;
        break;
      }
    } else if (++since_cross >= kStallWindow) {
      since_cross = 0;
      if (!best) {
        lambda = std::min(lambda * 2.0, lambda_cap);
      } else {
        eta *= kStepDecay;
        if (eta < kMinStep) {
          ++it;
          break;
        }
      }
    }
    z = std::move(next);
  }

  std::size_t evaluations = 0;
  if (best && theta == 0.0) best = search.refine(*best, /*analytic=*/true, evaluations);
  return make_result(x, best, c, cfg.metric, to_string(cfg.kind), it + evaluations);
}

CounterfactualResult bisection(const CegaConfig& cfg, const Classifier& c, ConstVec x, Rng& rng) {
  Search search(cfg, c, x);
  const int side = search.side();
  std::vector<Instance> anchors;
  std::size_t probes = 0;
  if (cfg.reference) {
    const auto& ref = *cfg.reference;
    std::vector<std::size_t> order(ref.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t i : order) {
      if (anchors.size() >= cfg.directions) break;
      vec::require_same_dim(ref[i].size(), x.size(), "bisection reference");
      ++probes;
      if (c.decide(ref[i]) != side) anchors.push_back(ref[i]);
    }
  } else {
    Instance probe(x.size());
    while (anchors.size() < cfg.directions && probes < cfg.probe_budget) {
      for (double& v : probe) v = rng.uniform();
      ++probes;
      if (c.decide(probe) != side) anchors.push_back(probe);
    }
  }

  std::optional<Candidate> best;
  std::size_t evaluations = probes;
  for (const Instance& a : anchors) {
    auto cand = search.along_segment(a);
    if (!cand) continue;
    Candidate refined = search.refine(std::move(*cand), /*analytic=*/false, evaluations);
    if (better(refined, best)) best = std::move(refined);
  }
  return make_result(x, best, c, cfg.metric, "bisection", evaluations);
}

std::optional<Instance> nearest_prototype(const CegaConfig& cfg, const Classifier& c, ConstVec x) {
  if (!cfg.reference) throw Error("no-prototypes", "no reference set");
  const int side = c.decide(x);
  std::vector<std::pair<double, std::size_t>> opposite;
  const auto& ref = *cfg.reference;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    vec::require_same_dim(ref[i].size(), x.size(), "prototype reference");
    if (c.decide(ref[i]) != side) opposite.emplace_back(cfg.metric(x, ref[i]), i);
  }
  if (opposite.empty()) throw Error("no-prototypes", "no opposite-class reference points");
  const std::size_t k = std::min(cfg.prototypes, opposite.size());
  std::partial_sort(opposite.begin(), opposite.begin() + static_cast<std::ptrdiff_t>(k), opposite.end());
  Instance centroid(x.size(), 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const Instance& p = ref[opposite[j].second];
    for (std::size_t i = 0; i < x.size(); ++i) centroid[i] += p[i] / static_cast<double>(k);
  }
  return centroid;
}

}  // namespace

std::string to_string(CegaKind kind) {
  switch (kind) {
    case CegaKind::Gradient: return "gradient";
    case CegaKind::Bisection: return "bisection";
    case CegaKind::Prototype: return "prototype";
    case CegaKind::LinearOracle: return "linear-oracle";
  }
  return "unknown";
}

CegaKind parse_cega_kind(const std::string& name) {
  if (name == "gradient") return CegaKind::Gradient;
  if (name == "bisection") return CegaKind::Bisection;
  if (name == "prototype") return CegaKind::Prototype;
  if (name == "linear-oracle" || name == "oracle") return CegaKind::LinearOracle;
  throw Error("unknown-generator", name);
}

void CegaConfig::validate() const {
  if (max_iterations < 1) throw Error("invalid-config", "max iterations must be at least 1");
  if (!(overshoot > 0.0)) throw Error("invalid-config", "overshoot must be positive");
  if (lambda < 0.0) throw Error("invalid-config", "lambda must be non-negative");
  if (!(step_size > 0.0)) throw Error("invalid-config", "step size must be positive");
  if (prototype_weight < 0.0) throw Error("invalid-config", "prototype weight must be non-negative");
  if (kind == CegaKind::Prototype && prototypes == 0) throw Error("invalid-config", "prototype count must be positive");
}

CounterfactualResult generate(const CegaConfig& cfg, const Classifier& c, ConstVec x, const RngHandle& handle) {
  cfg.validate();
  vec::require_same_dim(x.size(), c.dim(), "generate");
  if (cfg.metric.dim() != 0) vec::require_same_dim(x.size(), cfg.metric.dim(), "generate metric");
  Rng rng(handle);
  switch (cfg.kind) {
    case CegaKind::Gradient:
      return descend(cfg, c, x, rng, std::nullopt);
    case CegaKind::Prototype:
      return descend(cfg, c, x, rng, nearest_prototype(cfg, c, x));
    case CegaKind::Bisection:
      return bisection(cfg, c, x, rng);
    case CegaKind::LinearOracle: {
      const auto plane = c.hyperplane();
      if (!plane) throw Error("linear-oracle-needs-hyperplane", c.kind());
      CounterfactualResult r = linear_oracle(plane->w, plane->b, x, cfg.overshoot, cfg.metric);
      // Validity is judged by the classifier itself, not the plane copy.
      r.valid = r.valid && c.decide(r.counterfactual) != c.decide(x);
      if (!r.valid) r.strength = std::numeric_limits<double>::infinity();
      return r;
    }
  }
  throw Error("unknown-generator");
}

CounterfactualResult linear_oracle(const std::vector<double>& w, double b, ConstVec x, double overshoot,
                                   const Metric& metric) {
  vec::require_same_dim(x.size(), w.size(), "linear_oracle");
  if (vec::norm2(w) == 0.0) throw Error("degenerate-hyperplane");
  const LinearModel plane(w, b);
  const int side = plane.decide(x);

  // Anchor: any point on the plane.
  const double ww = vec::dot(w, w);
  const Instance on_plane = vec::add_scaled(Instance(x.size(), 0.0), -b / ww, w);
  Instance proj = metric.project_onto_hyperplane(x, w, on_plane);

  // Overshoot direction: the metric-projection direction of a unit step
  // against x's side, normalized in the Euclidean sense.
  const Instance probe = vec::add_scaled(on_plane, static_cast<double>(side), w);
  Instance dir = vec::sub(metric.project_onto_hyperplane(probe, w, on_plane), probe);
  const double dn = vec::norm2(dir);
  Instance cf = vec::add_scaled(proj, overshoot / dn, dir);

  CounterfactualResult r;
  r.source.assign(x.begin(), x.end());
  r.generator = "linear-oracle";
  r.iterations = 1;
  const Instance unclipped = cf;
  vec::clip_unit(cf);
  r.clipped = !vec::in_unit_cube(proj) || cf != unclipped;
  r.counterfactual = std::move(cf);
  r.perturbation = vec::sub(r.counterfactual, r.source);
  r.valid = plane.decide(r.counterfactual) != side;
  r.strength = r.valid ? metric(r.source, r.counterfactual) : std::numeric_limits<double>::infinity();
  if (!r.valid) {
    r.counterfactual = r.source;
    r.perturbation.assign(x.size(), 0.0);
  }
  return r;
}

}  // namespace wrckit
