#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wrckit/cega/cega.hpp"
#include "wrckit/core/metric.hpp"
#include "wrckit/evalharness/metrics.hpp"
#include "wrckit/models/classifier.hpp"
#include "wrckit/wrctest/wrctest.hpp"

namespace wrckit {

// One before/after WRC-Test comparison over a sample of test instances.
struct TableProtocol {
  std::string dataset;
  std::vector<Instance> test;       // normalized candidates for the sample
  std::vector<Instance> reference;  // normalized training rows: LOF reference and prototypes
  const Classifier* model = nullptr;
  std::string model_id;
  double model_accuracy = std::numeric_limits<double>::quiet_NaN();
  double accuracy_threshold = 0.70;

  std::vector<CegaKind> generators{CegaKind::Gradient, CegaKind::Prototype};
  std::vector<MetricKind> metrics{MetricKind::L1, MetricKind::Euclidean};
  std::size_t n_samples = 100;

  CegaConfig generator;  // kind, metric and reference are set per row
  WrcTestConfig wrc;     // robustness.metric is set per row
  // When in (0,1], tau for each generator/metric pair is this quantile of the
  // bare WRC values of the sample instead of wrc.tau.
  double tau_quantile = 0.0;

  std::size_t lof_k = 10;
  double lof_threshold = 1.5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct ReportRow {
  std::string method;  // generator, with "+WRC-Test" when searched
  std::string generator;
  bool wrc_test = false;
  std::string metric;  // l1 | l2
  double tau = 0.0;
  Summary cost;
  Summary lof;  // inlier indicator: mean is the inlier fraction
  double lof_raw_mean = 0.0;
  Summary wrc;
  double validity = 0.0;
  std::size_t total = 0;
  std::size_t included = 0;          // valid counterfactuals in COST/LOF
  std::size_t excluded_invalid = 0;  // invalid counterfactuals
  std::size_t failed_search = 0;     // WRC-Test searches without a pass
  std::size_t undefined_wrc = 0;
  double mean_steps = 0.0;
};

struct EvalReport {
  std::string dataset;
  std::size_t sample_size = 0;
  std::vector<std::pair<std::string, std::string>> fingerprint;
  std::vector<std::string> warnings;
  std::vector<ReportRow> rows;
};

// For each generator x {bare, +WRC-Test} x metric: counterfactuals for the
// sampled instances, COST from the original instance, VAL, LOF inlier
// fraction and mean WRC (verbatim sum). Bare WRC is the search's step-0
// estimate. Failed searches are excluded from the metrics and counted.
EvalReport run_table(const TableProtocol& protocol);

void write_report_csv(std::ostream& out, const EvalReport& report);
std::string report_json(const EvalReport& report);

// Type-7 quantile of a non-empty sample.
double quantile(std::vector<double> values, double q);

}  // namespace wrckit
