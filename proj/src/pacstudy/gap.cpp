#include "wrckit/pacstudy/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"
#include "wrckit/core/parallel.hpp"

namespace wrckit {
namespace {

constexpr std::uint64_t kTrainStream = 0x545241;
constexpr std::uint64_t kEvalStream = 0x45564c;
constexpr std::uint64_t kPointStream = 0x505453;
constexpr std::uint64_t kBayesStream = 0x424159;

// Two-sided 97.5% Student t quantiles for 1..30 degrees of freedom.
double t_quantile(std::size_t dof) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                 2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                                 2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (dof == 0) return std::numeric_limits<double>::infinity();
  return dof <= 30 ? table[dof - 1] : 1.96;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

std::optional<double> wrc_or_none(const RobustnessConfig& rob, const Classifier& c, const CegaConfig& gen,
                                  ConstVec x, const RngHandle& rng) {
  try {
    return discrete_wrc(rob, c, gen, x, rng).value;
  } catch (const Error& e) {
    if (e.code() != "estimate-undefined") throw;
    return std::nullopt;
  }
}

}  // namespace

Learner logistic_learner(TrainConfig cfg) {
  return [cfg](const Dataset& data, std::uint64_t seed) -> std::shared_ptr<const Classifier> {
    TrainConfig c = cfg;
    c.seed = seed;
    return train_logistic(data, c).model;
  };
}

Learner mlp_learner(TrainConfig cfg) {
  return [cfg](const Dataset& data, std::uint64_t seed) -> std::shared_ptr<const Classifier> {
    TrainConfig c = cfg;
    c.seed = seed;
    return train_mlp(data, c).model;
  };
}

GapEstimate wrc_gap_for(const PacProblem& problem, const Classifier& model, const CegaConfig& gen,
                        const RobustnessConfig& rob, std::size_t n_eval_x, const RngHandle& eval,
                        const GapOptions& options) {
  if (n_eval_x < 1) throw Error("invalid-config", "n_eval_x must be at least 1");
  vec::require_same_dim(model.dim(), problem.dim(), "wrc_gap model");
  RobustnessConfig cfg = rob;
  cfg.normalized = true;
  cfg.workers = 1;
  const Classifier& bayes = *problem.bayes;
  const Classifier& h = options.inject_bayes ? bayes : model;

  auto draw_points = [&](const RngHandle& stream) {
    Rng points(stream.child(kPointStream));
    std::vector<Instance> xs(n_eval_x, Instance(problem.dim()));
    for (auto& x : xs) {
      for (double& v : x) v = points.uniform();
    }
    return xs;
  };
  GapEstimate out;
  if (!options.common_random_numbers) {
    // Independent Monte Carlo for each expectation: separate points and balls.
    const RngHandle other = eval.child(kBayesStream);
    const auto xs_model = draw_points(eval);
    const auto xs_bayes = draw_points(other);
    std::vector<double> wm;
    std::vector<double> wb;
    for (std::size_t i = 0; i < n_eval_x; ++i) {
      if (auto w = wrc_or_none(cfg, h, gen, xs_model[i], eval.child(i))) {
        wm.push_back(*w);
      } else {
        ++out.dropped;
      }
      if (auto w = wrc_or_none(cfg, bayes, gen, xs_bayes[i], other.child(i))) {
        wb.push_back(*w);
      } else {
        ++out.dropped;
      }
    }
    if (wm.empty() || wb.empty()) throw Error("estimate-undefined", "no evaluation point has an estimate");
    auto mean_var = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      const double var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
      return std::pair{m, var / static_cast<double>(v.size())};
    };
    const auto [m_model, v_model] = mean_var(wm);
    const auto [m_bayes, v_bayes] = mean_var(wb);
    out.evaluated = std::min(wm.size(), wb.size());
    out.wrc_model = m_model;
    out.wrc_bayes = m_bayes;
    out.gap = std::abs(m_model - m_bayes);
    out.std_error = std::sqrt(v_model + v_bayes);
    return out;
  }

  const auto xs = draw_points(eval);
  std::vector<double> diffs;
  double sum_model = 0.0;
  double sum_bayes = 0.0;
  for (std::size_t i = 0; i < n_eval_x; ++i) {
    const RngHandle shared = eval.child(i);
    const auto wm = wrc_or_none(cfg, h, gen, xs[i], shared);
    const auto wb = wrc_or_none(cfg, bayes, gen, xs[i], shared);
    if (!wm || !wb) {
      ++out.dropped;
      continue;
    }
    sum_model += *wm;
    sum_bayes += *wb;
    diffs.push_back(*wm - *wb);
  }
  out.evaluated = diffs.size();
  if (diffs.empty()) throw Error("estimate-undefined", "no evaluation point has both estimates");
  const double n = static_cast<double>(diffs.size());
  out.wrc_model = sum_model / n;
  out.wrc_bayes = sum_bayes / n;
  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= n;
  out.gap = std::abs(mean);
  if (diffs.size() > 1) {
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

GapEstimate wrc_gap(const PacProblem& problem, const Learner& learner, const CegaConfig& gen,
                    const RobustnessConfig& rob, std::size_t T, std::size_t n_eval_x, const RngHandle& train,
                    const RngHandle& eval, const GapOptions& options) {
  if (options.inject_bayes) return wrc_gap_for(problem, *problem.bayes, gen, rob, n_eval_x, eval, options);
  const Dataset sample = sample_labeled(problem, T, train);
  const auto model = learner(sample, mix64(train.seed) ^ train.child(1).stream);
  return wrc_gap_for(problem, *model, gen, rob, n_eval_x, eval, options);
}

GapEstimate wrc_gap(const PacProblem& problem, const Learner& learner, const CegaConfig& gen,
                    const RobustnessConfig& rob, std::size_t T, std::size_t n_eval_x, const RngHandle& rng,
                    const GapOptions& options) {
  return wrc_gap(problem, learner, gen, rob, T, n_eval_x, rng.child(kTrainStream), rng.child(kEvalStream),
                 options);
}

GapCurve gap_curve(const PacProblem& problem, const Learner& learner, const CegaConfig& gen,
                   const RobustnessConfig& rob, const std::vector<std::size_t>& T_grid, std::size_t repeats,
                   std::size_t n_eval_x, const RngHandle& rng, const GapOptions& options, std::size_t workers) {
  if (T_grid.size() < 3) throw Error("invalid-config", "T grid needs at least three points");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (T_grid[i] < 1 || (i > 0 && T_grid[i] <= T_grid[i - 1])) {
      throw Error("invalid-config", "T grid must be strictly increasing and positive");
    }
  }
  if (repeats < 1) throw Error("invalid-config", "repeats must be at least 1");

  GapCurve curve;
  curve.T = T_grid;
  curve.repeats = repeats;
  curve.cells.assign(T_grid.size(), std::vector<GapEstimate>(repeats));
  const std::size_t cells = T_grid.size() * repeats;
  parallel_for(cells, workers, [&](std::size_t cell) {
    const std::size_t ti = cell / repeats;
    const std::size_t r = cell % repeats;
    const RngHandle train = rng.child(kTrainStream).child(r).child(T_grid[ti]);
    const RngHandle eval = rng.child(kEvalStream).child(r);
    curve.cells[ti][r] = wrc_gap(problem, learner, gen, rob, T_grid[ti], n_eval_x, train, eval, options);
  });

  std::vector<double> log_t;
  std::vector<double> log_gap;
  std::vector<double> tvals;
  for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
    std::vector<double> g;
    for (const auto& c : curve.cells[ti]) g.push_back(c.gap);
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    double se = std::numeric_limits<double>::quiet_NaN();
    if (g.size() > 1) {
      double ss = 0.0;
      for (double v : g) ss += (v - mean) * (v - mean);
      se = std::sqrt(ss / static_cast<double>(g.size() - 1) / static_cast<double>(g.size()));
    }
    curve.mean_gap.push_back(mean);
    curve.mean_std_error.push_back(se);
    tvals.push_back(static_cast<double>(T_grid[ti]));
    if (mean > 0.0) {
      log_t.push_back(std::log(static_cast<double>(T_grid[ti])));
      log_gap.push_back(std::log(mean));
    }
  }
  curve.spearman = spearman(tvals, curve.mean_gap);
  if (log_t.size() < 2) {
    curve.degenerate = true;
    curve.slope = curve.slope_low = curve.slope_high = std::numeric_limits<double>::quiet_NaN();
  } else {
    const LineFit fit = fit_line(log_t, log_gap);
    curve.slope = fit.slope;
    const double half = log_t.size() > 2 ? t_quantile(log_t.size() - 2) * fit.slope_std_error
                                         : std::numeric_limits<double>::infinity();
    curve.slope_low = fit.slope - half;
    curve.slope_high = fit.slope + half;
  }
  return curve;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw Error("invalid-config", "spearman needs two equal-length samples");
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("invalid-config", "line fit needs two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("invalid-config", "line fit needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      sse += r * r;
    }
    f.slope_std_error = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return f;
}

void write_gap_csv(std::ostream& out, const GapCurve& curve) {
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  out << "T,repeat,gap,stderr\n";
  for (std::size_t ti = 0; ti < curve.T.size(); ++ti) {
    for (std::size_t r = 0; r < curve.cells[ti].size(); ++r) {
      const GapEstimate& g = curve.cells[ti][r];
      out << curve.T[ti] << ',' << r << ',' << format_double(g.gap) << ',' << format_double(g.std_error) << '\n';
    }
  }
  for (std::size_t ti = 0; ti < curve.T.size(); ++ti) {
    out << curve.T[ti] << ",mean," << format_double(curve.mean_gap[ti]) << ',' << num(curve.mean_std_error[ti])
        << '\n';
  }
  out << "summary,slope," << num(curve.slope) << ','
      << (curve.degenerate ? std::string() : num(0.5 * (curve.slope_high - curve.slope_low))) << '\n';
  out << "summary,spearman," << num(curve.spearman) << ",\n";
  out << "summary,degenerate," << (curve.degenerate ? 1 : 0) << ",\n";
}

}  // namespace wrckit
