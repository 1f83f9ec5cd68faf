#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "wrckit/cega/cega.hpp"
#include "wrckit/models/training.hpp"
#include "wrckit/pacstudy/problem.hpp"
#include "wrckit/robustness/robustness.hpp"

namespace wrckit {

// Training procedure L: (sample, seed) -> h_T.
using Learner = std::function<std::shared_ptr<const Classifier>(const Dataset&, std::uint64_t seed)>;
Learner logistic_learner(TrainConfig cfg);
Learner mlp_learner(TrainConfig cfg);

struct GapOptions {
  // Evaluate h_T and h* on the same points with the same ball samples and
  // generator stream (paired standard error); otherwise each expectation gets
  // its own points and streams (unpaired standard error).
  bool common_random_numbers = true;
  // Use h* itself as h_T (the gap is then exactly zero).
  bool inject_bayes = false;
};

struct GapEstimate {
  double gap = 0.0;        // |mean_T - mean_*|
  double std_error = 0.0;  // of the paired mean difference
  double wrc_model = 0.0;  // E_x WRC(C, h_T), normalized variant
  double wrc_bayes = 0.0;  // E_x WRC(C, h*)
  std::size_t evaluated = 0;
  std::size_t dropped = 0;  // points where either estimate was undefined
};

// Streams: training sample and learner seed from `train`, evaluation points
// and ball samples from `eval`.
GapEstimate wrc_gap(const PacProblem& problem, const Learner& learner, const CegaConfig& gen,
                    const RobustnessConfig& rob, std::size_t T, std::size_t n_eval_x, const RngHandle& train,
                    const RngHandle& eval, const GapOptions& options = {});
GapEstimate wrc_gap(const PacProblem& problem, const Learner& learner, const CegaConfig& gen,
                    const RobustnessConfig& rob, std::size_t T, std::size_t n_eval_x, const RngHandle& rng,
                    const GapOptions& options = {});

// Gap of an already trained h_T.
GapEstimate wrc_gap_for(const PacProblem& problem, const Classifier& model, const CegaConfig& gen,
                        const RobustnessConfig& rob, std::size_t n_eval_x, const RngHandle& eval,
                        const GapOptions& options = {});

struct GapCurve {
  std::vector<std::size_t> T;
  std::size_t repeats = 0;
  std::vector<std::vector<GapEstimate>> cells;  // [T index][repeat]
  std::vector<double> mean_gap;                 // per T, over repeats
  std::vector<double> mean_std_error;           // standard error across repeats (NaN if repeats == 1)
  double slope = 0.0;  // least squares of log(mean gap) on log(T)
  double slope_low = 0.0;
  double slope_high = 0.0;  // 95% band
  double spearman = 0.0;    // rank correlation of T and mean gap
  bool degenerate = false;  // slope undefined (fewer than two positive mean gaps)
};

// Repeat r evaluates every T on the same evaluation points and ball samples;
// training samples are independent per (T, r).
GapCurve gap_curve(const PacProblem& problem, const Learner& learner, const CegaConfig& gen,
                   const RobustnessConfig& rob, const std::vector<std::size_t>& T_grid, std::size_t repeats,
                   std::size_t n_eval_x, const RngHandle& rng, const GapOptions& options = {},
                   std::size_t workers = 1);

// Rows "T,repeat,gap,stderr"; per-T rows with repeat "mean" (stderr across
// repeats, empty when repeats == 1); summary rows with T "summary".
void write_gap_csv(std::ostream& out, const GapCurve& curve);

// Spearman rank correlation with average ranks for ties; NaN if either side is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wrckit
