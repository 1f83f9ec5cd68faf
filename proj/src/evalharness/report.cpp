#include "wrckit/evalharness/report.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "json.hpp"
#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"
#include "wrckit/core/parallel.hpp"

namespace wrckit {
namespace {

constexpr std::uint64_t kSelectStream = 0x53454c;
constexpr std::uint64_t kInstanceStream = 0x494e53;

struct Bare {
  double wrc = std::numeric_limits<double>::infinity();
  CounterfactualResult cf;
};

std::string metric_label(MetricKind kind) { return kind == MetricKind::L1 ? "l1" : "l2"; }

std::string fmt(double v) { return format_double(v); }

void fill_metrics(ReportRow& row, const Classifier& c, const Metric& metric, const std::vector<Instance>& reference,
                  const TableProtocol& p, const std::vector<CounterfactualResult>& results,
                  const std::vector<double>& wrc) {
  std::vector<Instance> cfs;
  std::vector<double> costs;
  for (const auto& r : results) {
    if (!r.valid) {
      ++row.excluded_invalid;
      continue;
    }
    cfs.push_back(r.counterfactual);
    costs.push_back(metric(r.source, r.counterfactual));
  }
  row.included = cfs.size();
  row.cost = summarize(costs);
  if (!results.empty()) row.validity = validity(c, results);
  if (!cfs.empty()) {
    const LofResult lof = lof_scores(reference, cfs, p.lof_k, p.lof_threshold);
    std::vector<double> inlier;
    for (double s : lof.scores) inlier.push_back(s <= p.lof_threshold ? 1.0 : 0.0);
    row.lof = summarize(inlier);
    row.lof_raw_mean = summarize(lof.scores).mean;
  }
  std::vector<double> defined;
  for (double w : wrc) {
    if (std::isfinite(w)) {
      defined.push_back(w);
    } else {
      ++row.undefined_wrc;
    }
  }
  row.wrc = summarize(defined);
}

std::vector<std::pair<std::string, std::string>> fingerprint(const TableProtocol& p) {
  std::vector<std::pair<std::string, std::string>> f;
  auto add = [&](const std::string& k, const std::string& v) { f.emplace_back(k, v); };
  add("dataset", p.dataset);
  add("model", p.model_id);
  add("model.accuracy", fmt(p.model_accuracy));
  add("model.accuracy_threshold", fmt(p.accuracy_threshold));
  add("seed", std::to_string(p.seed));
  add("n_samples", std::to_string(p.n_samples));
  add("test_rows", std::to_string(p.test.size()));
  add("reference_rows", std::to_string(p.reference.size()));
  std::string gens;
  for (auto g : p.generators) gens += (gens.empty() ? "" : ";") + to_string(g);
  add("generators", gens);
  std::string metrics;
  for (auto m : p.metrics) metrics += (metrics.empty() ? "" : ";") + metric_label(m);
  add("metrics", metrics);
  const CegaConfig& g = p.generator;
  add("cega.max_iterations", std::to_string(g.max_iterations));
  add("cega.step_size", fmt(g.step_size));
  add("cega.lambda", fmt(g.lambda));
  add("cega.overshoot", fmt(g.overshoot));
  add("cega.directions", std::to_string(g.directions));
  add("cega.probe_budget", std::to_string(g.probe_budget));
  add("cega.refine_rounds", std::to_string(g.refine_rounds));
  add("cega.prototypes", std::to_string(g.prototypes));
  add("cega.prototype_weight", fmt(g.prototype_weight));
  const WrcTestConfig& w = p.wrc;
  add("wrc.tau", p.tau_quantile > 0.0 ? "quantile" : fmt(w.tau));
  add("wrc.tau_quantile", fmt(p.tau_quantile));
  add("wrc.max_steps", std::to_string(w.max_steps));
  add("wrc.sigma", fmt(w.effective_sigma()));
  add("wrc.policy", to_string(w.policy));
  add("wrc.r", fmt(w.robustness.radius));
  add("wrc.k", std::to_string(w.robustness.samples));
  add("wrc.phi", w.robustness.phi.describe());
  add("wrc.variant", w.robustness.normalized ? "normalized" : "sum");
  add("lof.k", std::to_string(p.lof_k));
  add("lof.threshold", fmt(p.lof_threshold));
  return f;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("empty-results", "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EvalReport run_table(const TableProtocol& p) {
  if (p.model == nullptr) throw Error("invalid-config", "no model");
  if (p.test.empty()) throw Error("empty-dataset", "no test rows");
  if (p.n_samples < 1) throw Error("invalid-config", "n_samples must be at least 1");
  p.wrc.validate();
  const Classifier& c = *p.model;

  EvalReport report;
  report.dataset = p.dataset;
  report.fingerprint = fingerprint(p);
  if (std::isfinite(p.model_accuracy) && p.model_accuracy < p.accuracy_threshold) {
    report.warnings.push_back("below-threshold");
  }

  const RngHandle root{p.seed, 0x4556414c};
  std::vector<std::size_t> order(p.test.size());
  std::iota(order.begin(), order.end(), 0);
  Rng select(root.child(kSelectStream));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[select.below(i)]);
  order.resize(std::min(p.n_samples, order.size()));
  report.sample_size = order.size();
  if (order.size() < p.n_samples) report.warnings.push_back("sample-smaller-than-requested");

  auto reference = std::make_shared<const std::vector<Instance>>(p.reference);
  const std::size_t n = order.size();

  for (std::size_t gi = 0; gi < p.generators.size(); ++gi) {
    for (std::size_t mi = 0; mi < p.metrics.size(); ++mi) {
      const Metric metric = Metric::from_kind(p.metrics[mi], c.dim());
      CegaConfig gen = p.generator;
      gen.kind = p.generators[gi];
      gen.metric = metric;
      gen.reference = reference;
      WrcTestConfig wcfg = p.wrc;
      wcfg.robustness.metric = metric;
      wcfg.robustness.workers = 1;
      auto stream = [&](std::size_t i) { return root.child(kInstanceStream).child(i).child(gi * 16 + mi); };

      std::vector<Bare> bare(n);
      parallel_for(n, p.workers, [&](std::size_t i) {
        const Instance& x = p.test[order[i]];
        const RngHandle step0 = wrc_step_stream(stream(i), 0);
        try {
          bare[i].wrc = discrete_wrc(wcfg.robustness, c, gen, x, step0).value;
        } catch (const Error& e) {
          if (e.code() != "estimate-undefined") throw;
        }
        bare[i].cf = generate(gen, c, x, generator_stream(step0));
      });

      if (p.tau_quantile > 0.0) {
        std::vector<double> finite;
        for (const Bare& b : bare) {
          if (std::isfinite(b.wrc)) finite.push_back(b.wrc);
        }
        if (finite.empty()) throw Error("estimate-undefined", "no bare WRC value to calibrate tau");
        wcfg.tau = std::max(quantile(finite, p.tau_quantile), std::numeric_limits<double>::min());
      }

      std::vector<WrcTestOutcome> searched(n);
      parallel_for(n, p.workers, [&](std::size_t i) {
        searched[i] = find_robust_counterfactual(wcfg, c, gen, p.test[order[i]], stream(i), bare[i].wrc);
      });

      ReportRow plain;
      plain.generator = to_string(gen.kind);
      plain.method = plain.generator;
      plain.metric = metric_label(p.metrics[mi]);
      plain.tau = wcfg.tau;
      plain.total = n;
      {
        std::vector<CounterfactualResult> results;
        std::vector<double> wrc;
        for (const Bare& b : bare) {
          results.push_back(b.cf);
          wrc.push_back(b.wrc);
        }
        fill_metrics(plain, c, metric, p.reference, p, results, wrc);
      }

      ReportRow tested;
      tested.generator = plain.generator;
      tested.method = plain.generator + "+WRC-Test";
      tested.wrc_test = true;
      tested.metric = plain.metric;
      tested.tau = wcfg.tau;
      tested.total = n;
      {
        std::vector<CounterfactualResult> results;
        std::vector<double> wrc;
        double steps = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const WrcTestOutcome& o = searched[i];
          steps += static_cast<double>(o.steps);
          if (!o.passed) {
            ++tested.failed_search;
            continue;
          }
          // Judged against the user's instance, not the substitute.
          CounterfactualResult r = *o.counterfactual;
          r.source = p.test[order[i]];
          r.perturbation = vec::sub(r.counterfactual, r.source);
          r.valid = c.decide(r.counterfactual) != c.decide(r.source);
          r.strength = r.valid ? metric(r.source, r.counterfactual) : std::numeric_limits<double>::infinity();
          results.push_back(std::move(r));
          wrc.push_back(o.trajectory.back().wrc);
        }
        tested.mean_steps = steps / static_cast<double>(n);
        fill_metrics(tested, c, metric, p.reference, p, results, wrc);
      }
      report.rows.push_back(std::move(plain));
      report.rows.push_back(std::move(tested));
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  for (const auto& [k, v] : report.fingerprint) out << "# " << k << '=' << v << '\n';
  for (const auto& w : report.warnings) out << "# warning=" << w << '\n';
  out << "# sample_size=" << report.sample_size << '\n';
  out << "method,generator,wrc_test,metric,tau,cost_mean,cost_std,lof_mean,lof_std,lof_raw_mean,wrc_mean,wrc_std,"
         "val,total,included,excluded_invalid,failed_search,undefined_wrc,mean_steps\n";
  for (const ReportRow& r : report.rows) {
    out << r.method << ',' << r.generator << ',' << (r.wrc_test ? 1 : 0) << ',' << r.metric << ',' << fmt(r.tau)
        << ',' << fmt(r.cost.mean) << ',' << fmt(r.cost.std) << ',' << fmt(r.lof.mean) << ',' << fmt(r.lof.std)
        << ',' << fmt(r.lof_raw_mean) << ',' << fmt(r.wrc.mean) << ',' << fmt(r.wrc.std) << ','
        << fmt(r.validity) << ',' << r.total << ',' << r.included << ',' << r.excluded_invalid << ','
        << r.failed_search << ',' << r.undefined_wrc << ',' << fmt(r.mean_steps) << '\n';
  }
}

std::string report_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dataset"] = report.dataset;
  j["sample_size"] = report.sample_size;
  ordered_json fp = ordered_json::object();
  for (const auto& [k, v] : report.fingerprint) fp[k] = v;
  j["fingerprint"] = fp;
  j["warnings"] = report.warnings;
  ordered_json rows = ordered_json::array();
  for (const ReportRow& r : report.rows) {
    ordered_json row;
    row["method"] = r.method;
    row["generator"] = r.generator;
    row["wrc_test"] = r.wrc_test;
    row["metric"] = r.metric;
    row["tau"] = r.tau;
    row["cost"] = {{"mean", r.cost.mean}, {"std", r.cost.std}};
    row["lof"] = {{"mean", r.lof.mean}, {"std", r.lof.std}, {"raw_mean", r.lof_raw_mean}};
    row["wrc"] = {{"mean", r.wrc.mean}, {"std", r.wrc.std}};
    row["val"] = r.validity;
    row["total"] = r.total;
    row["included"] = r.included;
    row["excluded_invalid"] = r.excluded_invalid;
    row["failed_search"] = r.failed_search;
    row["undefined_wrc"] = r.undefined_wrc;
    row["mean_steps"] = r.mean_steps;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace wrckit
