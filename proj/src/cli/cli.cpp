#include "wrckit/cli/cli.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "wrckit/cega/cega.hpp"
#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"
#include "wrckit/core/parallel.hpp"
#include "wrckit/evalharness/data.hpp"
#include "wrckit/evalharness/report.hpp"
#include "wrckit/models/model_io.hpp"
#include "wrckit/models/training.hpp"
#include "wrckit/pacstudy/gap.hpp"
#include "wrckit/wrctest/wrctest.hpp"

namespace wrckit::cli {
namespace {

// Root stream per subcommand; instance i of a run uses root.child(i).
constexpr std::uint64_t kExplainTag = 0x4558504c;
constexpr std::uint64_t kWrcTestTag = 0x57524354;
constexpr std::uint64_t kPacProblemTag = 0x50524f42;
constexpr std::uint64_t kPacStudyTag = 0x50414353;
constexpr std::uint64_t kPacMarginTag = 0x4d415247;

using Fingerprint = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  std::string data, data_spec, model_in, model_out, out, json_out;
  std::string label_column = "label";
  std::string positive_token = "1";
  std::string negative_token;

  std::string model_kind = "mlp";
  TrainConfig train;
  bool allow_below_threshold = false;

  std::string generator = "gradient";
  std::string metric = "l2";
  std::string metric_weights;
  CegaConfig cega;

  double radius = 0.0;  // 0 selects 1e-5 * n
  std::size_t samples = 100;
  double phi_epsilon = 1e-6;
  bool normalized = false;
  std::size_t max_rejects = kDefaultMaxRejects;
  double tau = 1.0;
  std::size_t max_steps = 30;
  double sigma = 0.0;
  std::string policy = "anchor-fixed";
  std::string rows = "all";

  double test_fraction = 0.3;
  std::size_t n_samples = 100;
  std::string generators = "gradient,prototype";
  std::string metrics = "l1,l2";
  double tau_quantile = 0.0;
  std::size_t lof_k = 10;
  double lof_threshold = 1.5;

  std::size_t l = 1;
  double gamma = 2.0;
  double alpha = 1.0;
  double t0 = 0.1;
  double amplitude = 0.1;
  bool flat = false;
  std::string grid = "64,256,1024,4096";
  std::size_t repeats = 10;
  std::size_t n_eval = 200;
  std::string learner = "logistic";
  bool inject_bayes = false;
  bool independent = false;
  bool certify = false;
};

Error usage(const std::string& detail) { return Error("usage", detail); }

// ---- option registration ------------------------------------------------

void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--config", c.config_path, "key = value file; command-line flags override it");
  s->add_option("-s,--seed", c.seed, "global seed");
  s->add_option("-j,--workers", c.workers, "parallel workers")->check(CLI::PositiveNumber);
}

void add_data(CLI::App* s, RunConfig& c) {
  s->add_option("-d,--data", c.data, "headed CSV dataset")->required();
  s->add_option("--data.spec", c.data_spec, "ingest description file (overrides the data.* label options)");
  s->add_option("--data.label-column", c.label_column, "label column name");
  s->add_option("--data.positive-token", c.positive_token, "label token of the +1 class");
  s->add_option("--data.negative-token", c.negative_token, "label token of the -1 class (empty: any other)");
}

void add_model_in(CLI::App* s, RunConfig& c) {
  s->add_option("-m,--model", c.model_in, "model file (normalization sidecar <model>.norm is used if present)")
      ->required();
}

void add_out(CLI::App* s, RunConfig& c, const std::string& what) {
  s->add_option("-o,--out", c.out, what + " (default: stdout)");
}

// `single` adds the generator kind and metric choice (eval takes lists instead).
void add_generator(CLI::App* s, RunConfig& c, bool single) {
  if (single) {
    s->add_option("-g,--cega.generator,--generator", c.generator,
                  "gradient | bisection | prototype | linear-oracle");
    s->add_option("--cega.metric,--metric", c.metric, "l2 | l1 | weighted-l2");
    s->add_option("--cega.weights", c.metric_weights, "comma-separated weights for weighted-l2");
  }
  s->add_option("--cega.max-iterations", c.cega.max_iterations);
  s->add_option("--cega.step-size", c.cega.step_size);
  s->add_option("--cega.lambda", c.cega.lambda);
  s->add_option("--cega.overshoot", c.cega.overshoot);
  s->add_option("--cega.directions,--directions", c.cega.directions, "bisection anchors");
  s->add_option("--cega.probe-budget", c.cega.probe_budget);
  s->add_option("--cega.refine-rounds", c.cega.refine_rounds);
  s->add_option("--cega.prototypes", c.cega.prototypes);
  s->add_option("--cega.prototype-weight", c.cega.prototype_weight);
}

void add_robustness(CLI::App* s, RunConfig& c, const std::string& radius_help) {
  s->add_option("-r,--wrc.radius,--radius", c.radius, radius_help);
  s->add_option("-k,--wrc.samples,--samples", c.samples, "ball samples per WRC estimate");
  s->add_option("--wrc.phi-epsilon", c.phi_epsilon, "phi(t) = 1 / (t + epsilon)");
  s->add_option("--wrc.max-rejects", c.max_rejects, "ball rejection budget");
}

void add_train(CLI::App* s, RunConfig& c) {
  s->add_option("--train.epochs,--epochs", c.train.epochs);
  s->add_option("--train.batch-size", c.train.batch_size);
  s->add_option("--train.learning-rate,--lr", c.train.learning_rate);
  s->add_option("--train.weight-decay", c.train.weight_decay);
  s->add_option("--train.hidden1", c.train.hidden1);
  s->add_option("--train.hidden2", c.train.hidden2);
  s->add_option("--train.validation-fraction", c.train.validation_fraction);
}

// ---- config file merging ------------------------------------------------

const std::array<const char*, 5> kSubcommands{"train", "explain", "wrc-test", "eval", "pac-study"};

std::optional<std::string> config_path_in(const std::vector<std::string>& args, std::size_t from) {
  std::optional<std::string> path;
  for (std::size_t i = from; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

// ---- shared plumbing ----------------------------------------------------

Fingerprint echo_options(const CLI::App* s) {
  Fingerprint f;
  for (const CLI::Option* o : s->get_options()) {
    const std::string name = o->get_single_name();
    if (name == "help") continue;
    std::string value;
    if (o->get_expected_max() == 0) {  // flag
      value = o->count() > 0 && o->as<bool>() ? "true" : "false";
    } else {
      value = o->count() > 0 ? o->as<std::string>() : o->get_default_str();
    }
    f.emplace_back(name, value);
  }
  return f;
}

void write_fingerprint(std::ostream& out, const Fingerprint& f) {
  for (const auto& [k, v] : f) out << "# " << k << '=' << v << '\n';
}

class Output {
 public:
  explicit Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("io-error", "cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

Dataset load_data(const RunConfig& c) {
  IngestOptions opts;
  if (!c.data_spec.empty()) {
    opts = load_ingest_options(c.data_spec);
  } else {
    opts.label_column = c.label_column;
    opts.positive_token = c.positive_token;
    opts.negative_token = c.negative_token;
  }
  return ingest_csv(c.data, opts);
}

struct LoadedModel {
  std::shared_ptr<Classifier> model;
  std::optional<NormalizationRecord> normalization;
};

LoadedModel load(const std::string& path) {
  LoadedModel m;
  m.model = load_model(path);
  if (std::filesystem::exists(path + ".norm")) m.normalization = read_normalization(path + ".norm");
  return m;
}

// Maps raw rows into the model's unit-cube space.
Dataset to_model_space(Dataset d, const LoadedModel& m) {
  if (d.dim() != m.model->dim()) {
    throw Error("dimension-mismatch", "data has " + std::to_string(d.dim()) + " features, model expects " +
                                          std::to_string(m.model->dim()));
  }
  if (m.normalization) {
    for (Instance& row : d.rows) {
      row = m.normalization->apply(row);
      vec::clip_unit(row);
    }
    d.normalization = *m.normalization;
    return d;
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!vec::in_unit_cube(d.rows[i])) {
      throw Error("invalid-dataset", "row " + std::to_string(i) +
                                         " lies outside [0,1]^K and the model has no normalization sidecar");
    }
  }
  return d;
}

std::vector<std::size_t> select_rows(const std::string& spec, std::size_t n) {
  std::vector<std::size_t> idx;
  if (spec == "all") {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  for (const std::string& raw : split(spec, ',')) {
    const std::string part = trim(raw);
    if (part.empty()) continue;
    const auto dash = part.find('-');
    try {
      const std::size_t lo = std::stoul(part.substr(0, dash));
      const std::size_t hi = dash == std::string::npos ? lo : std::stoul(part.substr(dash + 1));
      for (std::size_t i = lo; i <= hi; ++i) idx.push_back(i);
    } catch (const std::logic_error&) {
      throw usage("bad row selection '" + part + "'");
    }
  }
  for (std::size_t i : idx) {
    if (i >= n) throw usage("row " + std::to_string(i) + " out of range (" + std::to_string(n) + " rows)");
  }
  return idx;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> v;
  for (const std::string& part : split(s, ',')) {
    if (!trim(part).empty()) v.push_back(parse_double(trim(part)));
  }
  return v;
}

Metric make_metric(const RunConfig& c, std::size_t dim) {
  const MetricKind kind = parse_metric_kind(c.metric);
  if (kind == MetricKind::WeightedL2 && !c.metric_weights.empty()) {
    auto w = parse_doubles(c.metric_weights);
    if (w.size() != dim) throw usage("cega.weights needs " + std::to_string(dim) + " values");
    return Metric::weighted_l2(std::move(w));
  }
  return Metric::from_kind(kind, dim);
}

CegaConfig make_cega(const RunConfig& c, const Dataset& reference) {
  CegaConfig g = c.cega;
  g.kind = parse_cega_kind(c.generator);
  g.metric = make_metric(c, reference.dim());
  g.reference = std::make_shared<const std::vector<Instance>>(reference.rows);
  g.validate();
  return g;
}

RobustnessConfig make_robustness(const RunConfig& c, const Metric& metric, std::size_t dim) {
  RobustnessConfig r;
  r.radius = c.radius > 0.0 ? c.radius : 1e-5 * static_cast<double>(dim);
  r.samples = c.samples;
  r.phi = PhiFunction::inverse_shifted(c.phi_epsilon);
  r.metric = metric;
  r.normalized = c.normalized;
  r.max_rejects = c.max_rejects;
  r.validate();
  return r;
}

std::string cell(double v) { return format_double(v); }

// ---- subcommands --------------------------------------------------------

int cmd_train(const RunConfig& c, Fingerprint fp, std::ostream& out, std::ostream& err) {
  if (c.model_out.empty()) throw usage("--model-out is required");
  const Dataset ds = normalize(load_data(c));
  TrainConfig t = c.train;
  t.seed = c.seed;
  std::shared_ptr<Classifier> model;
  TrainReport rep;
  if (c.model_kind == "mlp") {
    auto r = train_mlp(ds, t);
    model = r.model;
    rep = r.report;
  } else if (c.model_kind == "logistic") {
    auto r = train_logistic(ds, t);
    model = r.model;
    rep = r.report;
  } else {
    throw usage("unknown model kind '" + c.model_kind + "' (mlp | logistic)");
  }
  save_model(*model, c.model_out);
  write_normalization(c.model_out + ".norm", ds);

  fp.emplace_back("rows", std::to_string(ds.size()));
  fp.emplace_back("features", std::to_string(ds.dim()));
  fp.emplace_back("dropped_rows", std::to_string(ds.dropped_rows));
  Output o(c.out, out);
  write_fingerprint(*o, fp);
  *o << "train_accuracy=" << cell(rep.train_accuracy) << '\n'
     << "validation_accuracy=" << cell(rep.validation_accuracy) << '\n'
     << "train_size=" << rep.train_size << '\n'
     << "validation_size=" << rep.validation_size << '\n'
     << "epochs_run=" << rep.epochs_run << '\n'
     << "final_loss=" << cell(rep.final_loss) << '\n'
     << "below_threshold=" << (rep.below_threshold ? 1 : 0) << '\n'
     << "degenerate=" << (rep.degenerate ? 1 : 0) << '\n';
  if (!c.out.empty() && c.out != "-") out << "accuracy " << cell(rep.validation_accuracy) << '\n';
  if (rep.degenerate) err << "warning: all labels identical\n";
  if (rep.below_threshold) {
    err << (c.allow_below_threshold ? "warning: " : "error: ") << "below-threshold: validation accuracy "
        << cell(rep.validation_accuracy) << " < " << cell(t.accuracy_threshold) << '\n';
    if (!c.allow_below_threshold) return kNumericFailure;
  }
  return kOk;
}

int cmd_explain(const RunConfig& c, Fingerprint fp, std::ostream& out, std::ostream&) {
  const LoadedModel m = load(c.model_in);
  const Dataset d = to_model_space(load_data(c), m);
  const CegaConfig g = make_cega(c, d);
  const auto rows = select_rows(c.rows, d.size());
  const RngHandle root{c.seed, kExplainTag};
  std::vector<CounterfactualResult> results(rows.size());
  parallel_for(rows.size(), c.workers,
               [&](std::size_t i) { results[i] = generate(g, *m.model, d.rows[rows[i]], root.child(rows[i])); });

  fp.emplace_back("normalization", m.normalization ? c.model_in + ".norm" : "none");
  Output o(c.out, out);
  write_fingerprint(*o, fp);
  *o << "instance,label,prediction";
  for (std::size_t j = 0; j < d.dim(); ++j) *o << ",x" << j;
  for (std::size_t j = 0; j < d.dim(); ++j) *o << ",cf" << j;
  *o << ",strength,valid,clipped,iterations\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = results[i];
    *o << rows[i] << ',' << d.labels[rows[i]] << ',' << m.model->decide(r.source);
    for (double v : r.source) *o << ',' << cell(v);
    for (double v : r.counterfactual) *o << ',' << cell(v);
    *o << ',' << cell(r.strength) << ',' << (r.valid ? "true" : "false") << ',' << (r.clipped ? "true" : "false")
       << ',' << r.iterations << '\n';
  }
  return kOk;
}

int cmd_wrc_test(const RunConfig& c, Fingerprint fp, std::ostream& out, std::ostream& err) {
  const LoadedModel m = load(c.model_in);
  const Dataset d = to_model_space(load_data(c), m);
  const CegaConfig g = make_cega(c, d);
  WrcTestConfig w;
  w.tau = c.tau;
  w.max_steps = c.max_steps;
  w.sigma = c.sigma;
  w.policy = parse_ball_policy(c.policy);
  w.robustness = make_robustness(c, g.metric, d.dim());
  w.validate();
  const auto rows = select_rows(c.rows, d.size());
  const RngHandle root{c.seed, kWrcTestTag};
  std::vector<WrcTestOutcome> outcomes(rows.size());
  parallel_for(rows.size(), c.workers, [&](std::size_t i) {
    outcomes[i] = find_robust_counterfactual(w, *m.model, g, d.rows[rows[i]], root.child(rows[i]));
  });

  std::size_t passed = 0, steps = 0;
  for (const auto& oc : outcomes) {
    passed += oc.passed;
    steps += oc.steps;
  }
  const double n = static_cast<double>(std::max<std::size_t>(1, outcomes.size()));
  fp.emplace_back("resolved.wrc.radius", cell(w.robustness.radius));
  fp.emplace_back("resolved.wrc.sigma", cell(w.effective_sigma()));
  fp.emplace_back("normalization", m.normalization ? c.model_in + ".norm" : "none");
  fp.emplace_back("summary.instances", std::to_string(outcomes.size()));
  fp.emplace_back("summary.pass_rate", cell(static_cast<double>(passed) / n));
  fp.emplace_back("summary.mean_steps", cell(static_cast<double>(steps) / n));

  Output o(c.out, out);
  write_fingerprint(*o, fp);
  *o << "instance,passed,steps,wrc_initial,wrc_final,strength,valid,failure_reason";
  for (std::size_t j = 0; j < d.dim(); ++j) *o << ",x_final" << j;
  for (std::size_t j = 0; j < d.dim(); ++j) *o << ",cf" << j;
  *o << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& oc = outcomes[i];
    const bool has_cf = oc.counterfactual.has_value();
    *o << rows[i] << ',' << (oc.passed ? "true" : "false") << ',' << oc.steps << ','
       << cell(oc.trajectory.front().wrc) << ',' << cell(oc.trajectory.back().wrc) << ','
       << (has_cf ? cell(oc.counterfactual->strength) : "") << ','
       << (has_cf && oc.counterfactual->valid ? "true" : "false") << ',' << oc.failure_reason;
    for (double v : oc.x_final) *o << ',' << cell(v);
    for (std::size_t j = 0; j < d.dim(); ++j) *o << ',' << (has_cf ? cell(oc.counterfactual->counterfactual[j]) : "");
    *o << '\n';
  }
  if (!c.out.empty() && c.out != "-") {
    out << "pass_rate " << cell(static_cast<double>(passed) / n) << " mean_steps "
        << cell(static_cast<double>(steps) / n) << '\n';
  }
  (void)err;
  return kOk;
}

int cmd_eval(const RunConfig& c, const Fingerprint& fp, std::ostream& out, std::ostream& err) {
  const LoadedModel m = load(c.model_in);
  const Dataset d = to_model_space(load_data(c), m);
  const Split parts = train_test_split(d, c.test_fraction, c.seed);

  TableProtocol p;
  p.dataset = d.name;
  p.test = parts.test.rows;
  p.reference = parts.train.rows;
  p.model = m.model.get();
  p.model_id = c.model_in;
  p.model_accuracy = accuracy(*m.model, parts.test);
  p.accuracy_threshold = c.train.accuracy_threshold;
  p.generators.clear();
  for (const std::string& s : split(c.generators, ',')) p.generators.push_back(parse_cega_kind(trim(s)));
  p.metrics.clear();
  for (const std::string& s : split(c.metrics, ',')) p.metrics.push_back(parse_metric_kind(trim(s)));
  if (p.generators.empty() || p.metrics.empty()) throw usage("empty generator or metric list");
  p.n_samples = c.n_samples;
  p.generator = c.cega;
  p.wrc.tau = c.tau;
  p.wrc.max_steps = c.max_steps;
  p.wrc.sigma = c.sigma;
  p.wrc.policy = parse_ball_policy(c.policy);
  p.wrc.robustness = make_robustness(c, Metric(), d.dim());
  p.tau_quantile = c.tau_quantile;
  p.lof_k = c.lof_k;
  p.lof_threshold = c.lof_threshold;
  p.seed = c.seed;
  p.workers = c.workers;

  EvalReport report = run_table(p);
  for (const auto& [k, v] : fp) report.fingerprint.emplace_back("arg." + k, v);
  {
    Output o(c.out, out);
    write_report_csv(*o, report);
  }
  if (!c.json_out.empty()) {
    Output j(c.json_out, out);
    *j << report_json(report) << '\n';
  }
  const bool below = std::find(report.warnings.begin(), report.warnings.end(), "below-threshold") !=
                     report.warnings.end();
  if (below) {
    err << (c.allow_below_threshold ? "warning: " : "error: ") << "below-threshold: model accuracy "
        << cell(p.model_accuracy) << " < " << cell(p.accuracy_threshold) << '\n';
    if (!c.allow_below_threshold) return kNumericFailure;
  }
  return kOk;
}

int cmd_pac_study(const RunConfig& c, Fingerprint fp, std::ostream& out, std::ostream& err) {
  ProblemOptions po;
  po.flat = c.flat;
  po.t0 = c.t0;
  po.amplitude = c.amplitude;
  const PacProblem problem = make_problem(c.l, c.gamma, c.alpha, RngHandle{c.seed, kPacProblemTag}, po);

  Learner learner;
  if (c.learner == "logistic") {
    learner = logistic_learner(c.train);
  } else if (c.learner == "mlp") {
    learner = mlp_learner(c.train);
  } else {
    throw usage("unknown learner '" + c.learner + "' (logistic | mlp)");
  }

  std::string gen_name = c.generator;
  if (gen_name == "auto") gen_name = c.learner == "logistic" && c.flat ? "linear-oracle" : "gradient";
  CegaConfig gen = c.cega;
  gen.kind = parse_cega_kind(gen_name);
  gen.metric = make_metric(c, problem.dim());
  gen.validate();

  RobustnessConfig rob = make_robustness(c, gen.metric, problem.dim());
  rob.normalized = true;

  std::vector<std::size_t> grid;
  for (const std::string& s : split(c.grid, ',')) {
    if (trim(s).empty()) continue;
    try {
      grid.push_back(std::stoul(trim(s)));
    } catch (const std::logic_error&) {
      throw usage("bad grid entry '" + s + "'");
    }
  }

  GapOptions go;
  go.common_random_numbers = !c.independent;
  go.inject_bayes = c.inject_bayes;
  const GapCurve curve = gap_curve(problem, learner, gen, rob, grid, c.repeats, c.n_eval,
                                   RngHandle{c.seed, kPacStudyTag}, go, c.workers);

  fp.emplace_back("resolved.generator", gen_name);
  fp.emplace_back("resolved.wrc.radius", cell(rob.radius));
  fp.emplace_back("problem.margin_constant", cell(problem.noise.margin_constant()));
  bool margin_ok = true;
  if (c.certify) {
    const MarginCheck mc = certify_margin(problem.noise, RngHandle{c.seed, kPacMarginTag});
    margin_ok = mc.passed;
    fp.emplace_back("margin.samples", std::to_string(mc.samples));
    for (std::size_t i = 0; i < mc.t.size(); ++i) {
      fp.emplace_back("margin.t" + std::to_string(i), cell(mc.t[i]) + ";" + cell(mc.estimate[i]) + ";" +
                                                          cell(mc.bound[i]));
    }
    fp.emplace_back("margin.passed", mc.passed ? "1" : "0");
  }

  Output o(c.out, out);
  write_fingerprint(*o, fp);
  write_gap_csv(*o, curve);
  if (!c.out.empty() && c.out != "-") {
    out << "spearman " << cell(curve.spearman) << " slope " << cell(curve.slope) << " [" << cell(curve.slope_low)
        << ", " << cell(curve.slope_high) << "]" << (curve.degenerate ? " degenerate" : "") << '\n';
  }
  if (!margin_ok) {
    err << "error: margin condition check failed\n";
    return kNumericFailure;
  }
  return kOk;
}

}  // namespace

int exit_code_for(const std::string& code) {
  static const std::set<std::string> data{
      "io-error",      "empty-dataset",       "missing-label-column", "non-numeric-column",
      "unknown-label", "invalid-dataset",     "dimension-mismatch",   "invalid-model-file",
      "parse-error",   "invalid-normalization", "unsupported-model",  "unknown-dataset"};
  static const std::set<std::string> use{
      "usage",          "invalid-config", "unknown-generator", "unknown-metric", "unknown-ball-policy",
      "invalid-metric", "invalid-radius", "invalid-phi",       "invalid-sigma",  "invalid-argument"};
  if (data.count(code)) return kDataError;
  if (use.count(code)) return kUsage;
  return kNumericFailure;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open config '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw usage(path + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    if (key.empty()) throw usage(path + ":" + std::to_string(number) + ": empty key");
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual robustness toolkit: train, explain, wrc-test, eval, pac-study", "wrckit"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1, 1);

  std::array<RunConfig, 5> cfg;
  std::array<CLI::App*, 5> sub{};

  // train
  {
    RunConfig& c = cfg[0];
    auto* s = sub[0] = app.add_subcommand("train", "train an MLP or logistic model on a CSV dataset");
    add_common(s, c);
    add_data(s, c);
    s->add_option("--model-out", c.model_out, "model file to write (sidecar <file>.norm is written too)");
    s->add_option("--kind", c.model_kind, "mlp | logistic");
    add_train(s, c);
    s->add_option("--train.threshold", c.train.accuracy_threshold, "validation accuracy bar");
    s->add_flag("--allow-below-threshold", c.allow_below_threshold, "exit 0 even under the accuracy bar");
    add_out(s, c, "accuracy report");
  }
  // explain
  {
    RunConfig& c = cfg[1];
    auto* s = sub[1] = app.add_subcommand("explain", "generate counterfactuals for dataset rows");
    add_common(s, c);
    add_data(s, c);
    add_model_in(s, c);
    add_generator(s, c, true);
    s->add_option("--rows", c.rows, "'all' or indices/ranges such as 0,3,10-19");
    add_out(s, c, "counterfactual CSV");
  }
  // wrc-test
  {
    RunConfig& c = cfg[2];
    auto* s = sub[2] = app.add_subcommand("wrc-test", "search robust counterfactuals (WRC-Test resampling)");
    add_common(s, c);
    add_data(s, c);
    add_model_in(s, c);
    add_generator(s, c, true);
    add_robustness(s, c, "ball radius; 0 means 1e-5 * features");
    s->add_option("--wrc.tau,--tau", c.tau, "WRC threshold");
    s->add_option("--wrc.max-steps,--max-steps", c.max_steps);
    s->add_option("--wrc.sigma", c.sigma, "substitute draw scale; 0 means radius / 3");
    s->add_option("--wrc.policy", c.policy, "anchor-fixed | recentering");
    s->add_flag("--wrc.normalized", c.normalized, "mean times ball volume instead of the plain sum");
    s->add_option("--rows", c.rows, "'all' or indices/ranges such as 0,3,10-19");
    add_out(s, c, "outcome CSV");
  }
  // eval
  {
    RunConfig& c = cfg[3];
    auto* s = sub[3] = app.add_subcommand("eval", "before/after WRC-Test table (COST, VAL, LOF, WRC)");
    add_common(s, c);
    add_data(s, c);
    add_model_in(s, c);
    s->add_option("--test-fraction", c.test_fraction, "held-out share; the rest is the LOF/prototype reference");
    s->add_option("-n,--n-samples", c.n_samples, "instances sampled from the held-out part");
    s->add_option("--generators", c.generators, "comma list of generators");
    s->add_option("--metrics", c.metrics, "comma list of metrics (l1, l2)");
    add_generator(s, c, false);
    add_robustness(s, c, "ball radius; 0 means 1e-5 * features");
    s->add_option("--wrc.tau,--tau", c.tau, "WRC threshold");
    s->add_option("--wrc.tau-quantile", c.tau_quantile, "if in (0,1]: tau = this quantile of bare WRC per row");
    s->add_option("--wrc.max-steps,--max-steps", c.max_steps);
    s->add_option("--wrc.sigma", c.sigma, "substitute draw scale; 0 means radius / 3");
    s->add_option("--wrc.policy", c.policy, "anchor-fixed | recentering");
    s->add_option("--lof.k", c.lof_k);
    s->add_option("--lof.threshold", c.lof_threshold);
    s->add_option("--train.threshold", c.train.accuracy_threshold, "model accuracy bar");
    s->add_flag("--allow-below-threshold", c.allow_below_threshold, "exit 0 even under the accuracy bar");
    add_out(s, c, "report CSV");
    s->add_option("--json", c.json_out, "structured report file");
  }
  // pac-study
  {
    RunConfig& c = cfg[4];
    c.generator = "auto";
    c.radius = 0.1;
    c.samples = 1000;
    c.train.validation_fraction = 0.0;
    auto* s = sub[4] = app.add_subcommand("pac-study", "WRC gap of h_T against the Bayes classifier over T");
    add_common(s, c);
    s->add_option("--pac.l", c.l, "boundary input dimension (instances have l + 1 features)");
    s->add_option("--pac.gamma", c.gamma, "Hölder smoothness");
    s->add_option("--pac.alpha", c.alpha, "Tsybakov noise exponent");
    s->add_option("--pac.t0", c.t0, "noise ramp width");
    s->add_option("--pac.amplitude", c.amplitude, "boundary coefficient scale");
    s->add_flag("--pac.flat", c.flat, "constant boundary f = 0.5");
    s->add_option("--pac.grid,--grid", c.grid, "comma list of training sizes T");
    s->add_option("--pac.repeats,--repeats", c.repeats);
    s->add_option("--pac.n-eval", c.n_eval, "evaluation points per expectation");
    s->add_option("--pac.learner", c.learner, "logistic | mlp");
    s->add_flag("--inject-bayes", c.inject_bayes, "use h* as h_T (gap must be 0)");
    s->add_flag("--pac.independent", c.independent, "independent evaluation samples instead of common ones");
    s->add_flag("--pac.certify", c.certify, "Monte-Carlo check of the margin condition");
    add_train(s, c);
    add_generator(s, c, true);
    add_robustness(s, c, "ball radius");
    add_out(s, c, "gap curve CSV");
  }

  // Config-file entries go right after the subcommand name so later flags win.
  std::vector<std::string> args = raw_args;
  std::size_t sub_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (std::find(kSubcommands.begin(), kSubcommands.end(), args[i]) != kSubcommands.end()) {
      sub_pos = i;
      break;
    }
  }
  try {
    if (sub_pos < args.size()) {
      if (auto path = config_path_in(args, sub_pos + 1)) {
        CLI::App* s = sub[static_cast<std::size_t>(
            std::find(kSubcommands.begin(), kSubcommands.end(), args[sub_pos]) - kSubcommands.begin())];
        std::vector<std::string> extra;
        for (const auto& [key, value] : read_config_file(*path)) {
          if (key == "config") throw usage("config files cannot include other config files");
          if (s->get_option_no_throw("--" + key) == nullptr) {
            throw usage("unknown config key '" + key + "' for " + args[sub_pos]);
          }
          extra.push_back("--" + key + "=" + value);
        }
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, extra.begin(), extra.end());
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == "usage" ? kUsage : exit_code_for(e.code());
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (std::size_t i = 0; i < sub.size(); ++i) {
      if (!sub[i]->parsed()) continue;
      const Fingerprint fp = echo_options(sub[i]);
      switch (i) {
        case 0: return cmd_train(cfg[i], fp, out, err);
        case 1: return cmd_explain(cfg[i], fp, out, err);
        case 2: return cmd_wrc_test(cfg[i], fp, out, err);
        case 3: return cmd_eval(cfg[i], fp, out, err);
        default: return cmd_pac_study(cfg[i], fp, out, err);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kUsage;
}

}  // namespace wrckit::cli
