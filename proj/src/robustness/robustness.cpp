#include "wrckit/robustness/robustness.hpp"

#include <cmath>
#include <optional>

#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"
#include "wrckit/core/parallel.hpp"

namespace wrckit {
namespace {

constexpr std::uint64_t kBallStream = 0x42414c4c;
constexpr std::uint64_t kGeneratorStream = 0x47454e;
constexpr std::uint64_t kVolumeStream = 0x564f4c;

CounterfactualResult counterfactual_or_throw(const Classifier& c, const CegaConfig& gen, ConstVec p,
                                             const RngHandle& rng) {
  CounterfactualResult r = generate(gen, c, p, rng);
  if (!r.valid) throw Error("cf-unobtainable");
  return r;
}

WrcEstimate estimate(EstimateKind kind, const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen,
                     ConstVec x, const std::vector<Instance>& samples, const RngHandle& rng) {
  cfg.validate();
  if (samples.empty()) throw Error("invalid-config", "no samples");
  const RngHandle gen_rng = rng.child(kGeneratorStream);
  const CounterfactualResult cx = generate(gen, c, x, gen_rng);
  if (!cx.valid) throw Error("estimate-undefined", "no counterfactual for x");
  const double sx = cfg.metric(x, cx.counterfactual);
  const int side = c.decide(x);

  std::vector<SampleContribution> parts(samples.size());
  parallel_for(samples.size(), cfg.workers, [&](std::size_t i) {
    SampleContribution& s = parts[i];
    const Instance& y = samples[i];
    vec::require_same_dim(y.size(), x.size(), "ball sample");
    s.index = i;
    s.d_xy = cfg.metric(x, y);
    s.strength_x = sx;
    s.crosses = c.decide(y) != side;
    const CounterfactualResult cy = generate(gen, c, y, gen_rng);
    if (!cy.valid) return;
    s.valid = true;
    s.strength_y = cfg.metric(y, cy.counterfactual);
    s.delta = kind == EstimateKind::WRC ? std::abs(sx - s.strength_y)
                                        : cfg.metric(cx.counterfactual, cy.counterfactual);
    s.contribution = s.delta * cfg.phi(s.d_xy);
  });

  WrcEstimate est;
  est.kind = kind;
  est.k = samples.size();
  est.r = cfg.radius;
  est.normalized = cfg.normalized;
  std::size_t retained = 0;
  for (const SampleContribution& s : parts) {
    if (!s.valid) {
      ++est.invalid_count;
      continue;
    }
    ++retained;
    est.value += s.contribution;
  }
  if (retained == 0) throw Error("estimate-undefined", "every sample lacks a counterfactual");
  if (cfg.normalized) {
    Rng vol_rng(rng.child(kVolumeStream));
    est.volume = estimate_ball_volume(x, cfg.radius, cfg.volume_samples, vol_rng);
    est.value = est.value / static_cast<double>(retained) * est.volume;
  }
  if (cfg.trace) {
    for (std::size_t i = 0; i < samples.size(); ++i) parts[i].y = samples[i];
    est.trace = std::move(parts);
  }
  return est;
}

}  // namespace

std::string to_string(EstimateKind kind) { return kind == EstimateKind::WRC ? "WRC" : "SRC"; }

void RobustnessConfig::validate() const {
  if (!(radius > 0.0)) throw Error("invalid-config", "radius must be positive");
  if (samples < 1) throw Error("invalid-config", "sample count must be at least 1");
  if (normalized && volume_samples < 1) throw Error("invalid-config", "volume samples must be at least 1");
}

double delta_tilde(const Classifier& c, const CegaConfig& gen, const Metric& m, ConstVec x, ConstVec y,
                   const RngHandle& rng) {
  const CounterfactualResult cx = counterfactual_or_throw(c, gen, x, rng);
  const CounterfactualResult cy = counterfactual_or_throw(c, gen, y, rng);
  return std::abs(m(x, cx.counterfactual) - m(y, cy.counterfactual));
}

double delta_src(const Classifier& c, const CegaConfig& gen, const Metric& m, ConstVec x, ConstVec y,
                 const RngHandle& rng) {
  const CounterfactualResult cx = counterfactual_or_throw(c, gen, x, rng);
  const CounterfactualResult cy = counterfactual_or_throw(c, gen, y, rng);
  return m(cx.counterfactual, cy.counterfactual);
}

RngHandle generator_stream(const RngHandle& rng) { return rng.child(kGeneratorStream); }

std::vector<Instance> ball_samples(const RobustnessConfig& cfg, ConstVec x, const RngHandle& rng) {
  cfg.validate();
  return sample_uniform_ball(x, cfg.radius, cfg.samples, rng.child(kBallStream), cfg.max_rejects);
}

WrcEstimate discrete_wrc(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const RngHandle& rng) {
  return estimate(EstimateKind::WRC, cfg, c, gen, x, ball_samples(cfg, x, rng), rng);
}

WrcEstimate discrete_src(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const RngHandle& rng) {
  return estimate(EstimateKind::SRC, cfg, c, gen, x, ball_samples(cfg, x, rng), rng);
}

WrcEstimate discrete_wrc(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const std::vector<Instance>& samples, const RngHandle& rng) {
  return estimate(EstimateKind::WRC, cfg, c, gen, x, samples, rng);
}

WrcEstimate discrete_src(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const std::vector<Instance>& samples, const RngHandle& rng) {
  return estimate(EstimateKind::SRC, cfg, c, gen, x, samples, rng);
}

ExpectedWrc expected_wrc(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen,
                         const std::vector<Instance>& xs, const RngHandle& rng) {
  if (xs.empty()) throw Error("invalid-config", "no instances");
  // Parallelism goes to the instances; each estimate runs sequentially.
  RobustnessConfig inner = cfg;
  inner.workers = 1;
  std::vector<std::optional<WrcEstimate>> slots(xs.size());
  parallel_for(xs.size(), cfg.workers, [&](std::size_t i) {
    try {
      slots[i] = discrete_wrc(inner, c, gen, xs[i], rng.child(i));
    } catch (const Error& e) {
      if (e.code() != "estimate-undefined") throw;
    }
  });

  ExpectedWrc out;
  for (auto& s : slots) {
    if (!s) {
      ++out.undefined;
      continue;
    }
    out.estimates.push_back(std::move(*s));
  }
  out.count = out.estimates.size();
  if (out.count == 0) throw Error("estimate-undefined", "no instance has a defined estimate");
  double sum = 0.0;
  for (const auto& e : out.estimates) sum += e.value;
  out.mean = sum / static_cast<double>(out.count);
  if (out.count > 1) {
    double ss = 0.0;
    for (const auto& e : out.estimates) ss += (e.value - out.mean) * (e.value - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(out.count - 1) / static_cast<double>(out.count));
  }
  return out;
}

void write_trace_csv(std::ostream& out, const WrcEstimate& est) {
  const std::size_t dim = est.trace.empty() ? 0 : est.trace.front().y.size();
  out << "sample_idx";
  for (std::size_t j = 0; j < dim; ++j) out << ",y_" << j;
  out << ",d_xy,strength_x,strength_y,contribution\n";
  for (const SampleContribution& s : est.trace) {
    out << s.index;
    for (double v : s.y) out << ',' << format_double(v);
    out << ',' << format_double(s.d_xy) << ',' << format_double(s.strength_x) << ',';
    if (s.valid) {
      out << format_double(s.strength_y) << ',' << format_double(s.contribution);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

}  // namespace wrckit
