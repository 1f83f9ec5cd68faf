#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "wrckit/cega/cega.hpp"
#include "wrckit/core/metric.hpp"
#include "wrckit/core/phi.hpp"
#include "wrckit/core/rng.hpp"
#include "wrckit/core/sampling.hpp"
#include "wrckit/models/classifier.hpp"

namespace wrckit {

enum class EstimateKind { WRC, SRC };
std::string to_string(EstimateKind kind);

struct RobustnessConfig {
  double radius = 1e-2;
  std::size_t samples = 100;  // k
  PhiFunction phi;
  Metric metric;
  // Sum over the k samples (default) or mean times vol(B(x,r) ∩ [0,1]^K),
  // which estimates the ball integral.
  bool normalized = false;
  std::size_t volume_samples = 4096;
  bool trace = false;
  std::size_t workers = 1;
  std::size_t max_rejects = kDefaultMaxRejects;

  void validate() const;
};

struct SampleContribution {
  std::size_t index = 0;
  Instance y;
  double d_xy = 0.0;
  double strength_x = 0.0;
  double strength_y = 0.0;
  double delta = 0.0;         // |strength_x - strength_y| (WRC) or d(C(x), C(y)) (SRC)
  double contribution = 0.0;  // delta * phi(d_xy)
  bool valid = false;
  bool crosses = false;  // y is classified differently from x
};

struct WrcEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::WRC;
  std::size_t k = 0;
  double r = 0.0;
  std::size_t invalid_count = 0;
  bool normalized = false;
  double volume = 0.0;  // set when normalized
  std::vector<SampleContribution> trace;
};

// |d(x, C(x)) - d(y, C(y))| under `m`; both counterfactuals use `rng`.
// Throws Error("cf-unobtainable") if either is invalid.
double delta_tilde(const Classifier& c, const CegaConfig& gen, const Metric& m, ConstVec x, ConstVec y,
                   const RngHandle& rng);
// d(C(x), C(y)) under `m`.
double delta_src(const Classifier& c, const CegaConfig& gen, const Metric& m, ConstVec x, ConstVec y,
                 const RngHandle& rng);

// Sum over k uniform samples y of B(x, r) ∩ [0,1]^K of delta(x,y) * phi(d(x,y)).
// The counterfactual of x is computed once; every counterfactual uses the
// same generator stream. Samples whose counterfactual is unobtainable are
// dropped and counted. Throws Error("estimate-undefined") if none remain.
WrcEstimate discrete_wrc(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const RngHandle& rng);
WrcEstimate discrete_src(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const RngHandle& rng);

// Same estimators on a caller-supplied sample set (k = samples.size()).
WrcEstimate discrete_wrc(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const std::vector<Instance>& samples, const RngHandle& rng);
WrcEstimate discrete_src(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen, ConstVec x,
                         const std::vector<Instance>& samples, const RngHandle& rng);

// The stream every counterfactual inside discrete_wrc(..., rng) is generated
// with; generate(gen, c, x, generator_stream(rng)) reproduces C(x).
RngHandle generator_stream(const RngHandle& rng);

// The ball samples discrete_wrc(cfg, ..., x, rng) would draw.
std::vector<Instance> ball_samples(const RobustnessConfig& cfg, ConstVec x, const RngHandle& rng);

struct ExpectedWrc {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;      // instances with a defined estimate
  std::size_t undefined = 0;  // instances dropped as estimate-undefined
  std::vector<WrcEstimate> estimates;  // one per defined instance, in input order
};

// Mean of discrete_wrc over xs (instance i uses rng.child(i)) with its
// standard error. Throws Error("estimate-undefined") if no instance is defined.
ExpectedWrc expected_wrc(const RobustnessConfig& cfg, const Classifier& c, const CegaConfig& gen,
                         const std::vector<Instance>& xs, const RngHandle& rng);

// Columns: sample_idx, y_0..y_{K-1}, d_xy, strength_x, strength_y, contribution.
void write_trace_csv(std::ostream& out, const WrcEstimate& est);

}  // namespace wrckit
