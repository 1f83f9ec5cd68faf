#include "wrckit/pacstudy/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wrckit/core/error.hpp"

namespace wrckit {
namespace {

double phase(const std::vector<int>& j, ConstVec u) {
  double s = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) s += j[i] * u[i];
  return std::numbers::pi * s;
}

// Frequency vectors with entries in [0, cap], at least one positive, L1 norm <= cap.
void enumerate(std::size_t l, int cap, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() == l) {
    int sum = 0;
    for (int v : cur) sum += v;
    if (sum > 0 && sum <= cap) out.push_back(cur);
    return;
  }
  for (int v = 0; v <= cap; ++v) {
    cur.push_back(v);
    enumerate(l, cap, cur, out);
    cur.pop_back();
  }
}

// Order-`order` derivative along axis i, by repeated central differences.
double axis_derivative(const BoundaryFunction& f, Instance u, std::size_t i, int order, double h) {
  if (order == 0) return f.value(u);
  const double c = u[i];
  u[i] = c + h;
  const double up = axis_derivative(f, u, i, order - 1, h);
  u[i] = c - h;
  const double down = axis_derivative(f, u, i, order - 1, h);
  return (up - down) / (2.0 * h);
}

}  // namespace

SmoothBoundary::SmoothBoundary(std::size_t l, double gamma, std::vector<Term> terms)
    : l_(l), gamma_(gamma), terms_(std::move(terms)) {
  if (l_ < 1) throw Error("invalid-config", "boundary dimension must be positive");
  for (const Term& t : terms_) {
    if (t.frequency.size() != l_) throw Error("dimension-mismatch", "boundary frequency vector");
  }
}

double SmoothBoundary::value(ConstVec u) const {
  vec::require_same_dim(u.size(), l_, "boundary value");
  double v = 0.5;
  for (const Term& t : terms_) v += t.coefficient * std::cos(phase(t.frequency, u));
  return v;
}

Instance SmoothBoundary::gradient(ConstVec u) const {
  vec::require_same_dim(u.size(), l_, "boundary gradient");
  Instance g(l_, 0.0);
  for (const Term& t : terms_) {
    const double s = -t.coefficient * std::sin(phase(t.frequency, u)) * std::numbers::pi;
    for (std::size_t i = 0; i < l_; ++i) g[i] += s * t.frequency[i];
  }
  return g;
}

std::optional<double> SmoothBoundary::constant_value() const {
  for (const Term& t : terms_) {
    if (t.coefficient != 0.0) return std::nullopt;
  }
  return 0.5;
}

double SmoothBoundary::range_bound() const {
  double s = 0.0;
  for (const Term& t : terms_) s += std::abs(t.coefficient);
  return s;
}

double holder_proxy(const BoundaryFunction& f, double gamma, std::size_t points) {
  if (!(gamma > 0.0)) throw Error("invalid-config", "gamma must be positive");
  if (points < 3) throw Error("invalid-config", "grid needs at least three points");
  const std::size_t l = f.dim();
  const int m = static_cast<int>(std::ceil(gamma)) - 1;
  const double frac = gamma - m;
  const double spacing = 1.0 / static_cast<double>(points - 1);
  const double h = 0.02;  // large enough that high-order differences stay above rounding noise

  std::size_t total = 1;
  for (std::size_t i = 0; i < l; ++i) total *= points;
  std::vector<double> sup(static_cast<std::size_t>(m) + 1, 0.0);
  double quotient = 0.0;
  Instance u(l);
  for (std::size_t cell = 0; cell < total; ++cell) {
    std::size_t rest = cell;
    for (std::size_t i = 0; i < l; ++i) {
      u[i] = static_cast<double>(rest % points) * spacing;
      rest /= points;
    }
    for (std::size_t i = 0; i < l; ++i) {
      for (int k = 0; k <= m; ++k) {
        sup[static_cast<std::size_t>(k)] =
            std::max(sup[static_cast<std::size_t>(k)], std::abs(axis_derivative(f, u, i, k, h)));
      }
      if (u[i] + spacing <= 1.0 + 1e-12) {
        Instance v = u;
        v[i] += spacing;
        const double diff = axis_derivative(f, v, i, m, h) - axis_derivative(f, u, i, m, h);
        quotient = std::max(quotient, std::abs(diff) / std::pow(spacing, frac));
      }
    }
  }
  double norm = quotient;
  for (double s : sup) norm += s;
  return norm;
}

double NoiseModel::eta(ConstVec x) const {
  if (constant_eta) return *constant_eta;
  const std::size_t l = boundary->dim();
  vec::require_same_dim(x.size(), l + 1, "eta");
  const double g = x[l] - boundary->value(x.first(l));
  if (g == 0.0) return 0.5;
  const double ramp = std::pow(std::min(1.0, std::abs(g) / t0), 1.0 / alpha);
  return 0.5 + 0.5 * (g > 0.0 ? ramp : -ramp);
}

double NoiseModel::margin_constant() const { return std::pow(2.0, alpha + 1.0) * t0; }

MarginCheck certify_margin(const NoiseModel& noise, RngHandle rng, std::size_t target_hits,
                           std::size_t max_samples) {
  MarginCheck out;
  const double c = noise.margin_constant();
  out.t = {noise.t0 / 4.0, noise.t0 / 2.0, noise.t0};
  for (double t : out.t) out.bound.push_back(1.1 * c * std::pow(t, noise.alpha));
  const double smallest = std::min(1.0, out.bound.front() / 1.1);
  const double wanted = smallest > 0.0 ? static_cast<double>(target_hits) / smallest : 1e300;
  out.samples = static_cast<std::size_t>(std::min(static_cast<double>(max_samples), std::ceil(wanted)));
  out.samples = std::max<std::size_t>(out.samples, 1000);

  const std::size_t dim = noise.boundary ? noise.boundary->dim() + 1 : 1;
  Rng r(rng);
  std::vector<std::size_t> hits(out.t.size(), 0);
  Instance x(dim);
  for (std::size_t s = 0; s < out.samples; ++s) {
    for (double& v : x) v = r.uniform();
    const double dev = std::abs(noise.eta(x) - 0.5);
    for (std::size_t i = 0; i < out.t.size(); ++i) {
      if (dev <= out.t[i]) ++hits[i];
    }
  }
  out.passed = true;
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    out.estimate.push_back(static_cast<double>(hits[i]) / static_cast<double>(out.samples));
    out.passed = out.passed && out.estimate[i] <= out.bound[i];
  }
  return out;
}

PacProblem make_problem(std::shared_ptr<const SmoothBoundary> boundary, double alpha, double t0) {
  if (!boundary) throw Error("invalid-config", "missing boundary");
  if (!(alpha > 0.0)) throw Error("invalid-config", "alpha must be positive");
  if (!(t0 > 0.0 && t0 <= 0.5)) throw Error("invalid-config", "t0 must lie in (0, 0.5]");
  PacProblem p;
  p.l = boundary->dim();
  p.gamma = boundary->gamma();
  p.boundary = boundary;
  p.noise.alpha = alpha;
  p.noise.t0 = t0;
  p.noise.boundary = boundary;
  p.bayes = std::make_shared<const BayesOracle>(boundary);
  return p;
}

PacProblem make_problem(std::size_t l, double gamma, double alpha, const RngHandle& rng,
                        const ProblemOptions& options) {
  if (l < 1) throw Error("invalid-config", "l must be at least 1");
  if (!(gamma > 0.0)) throw Error("invalid-config", "gamma must be positive");
  if (!(alpha > 0.0)) throw Error("invalid-config", "alpha must be positive");
  if (options.flat) return make_problem(std::make_shared<const SmoothBoundary>(l, gamma, std::vector<SmoothBoundary::Term>{}), alpha, options.t0);

  std::vector<std::vector<int>> freqs;
  std::vector<int> cur;
  enumerate(l, options.max_frequency, cur, freqs);
  const double decay = gamma + static_cast<double>(l) / 2.0 + options.decay_extra;
  Rng r(rng);
  for (std::size_t attempt = 0; attempt < options.max_retries; ++attempt) {
    std::vector<SmoothBoundary::Term> terms;
    for (const auto& j : freqs) {
      double norm = 0.0;
      for (int v : j) norm += static_cast<double>(v) * v;
      const double cap = options.amplitude * std::pow(std::sqrt(norm), -decay);
      terms.push_back({j, cap * r.uniform(-1.0, 1.0)});
    }
    auto boundary = std::make_shared<const SmoothBoundary>(l, gamma, std::move(terms));
    if (boundary->range_bound() > 0.4) continue;  // range must stay inside [0.1, 0.9]
    if (holder_proxy(*boundary, gamma, l == 1 ? 65 : 17) > options.holder_bound) continue;
    return make_problem(boundary, alpha, options.t0);
  }
  throw Error("boundary-not-interior", "no admissible coefficient draw");
}

Dataset sample_labeled(const PacProblem& problem, std::size_t T, const RngHandle& rng) {
  if (T < 1) throw Error("invalid-config", "T must be at least 1");
  Rng r(rng);
  Dataset ds;
  ds.name = "pac-sample";
  for (std::size_t i = 0; i < problem.dim(); ++i) ds.feature_names.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < T; ++i) {
    Instance x(problem.dim());
    for (double& v : x) v = r.uniform();
    const double eta = problem.noise.eta(x);
    ds.labels.push_back(r.uniform() < eta ? 1 : -1);
    ds.rows.push_back(std::move(x));
  }
  return ds;
}

}  // namespace wrckit
