#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wrckit/core/dataset.hpp"

namespace wrckit {

// Plain-text dataset description (key = value lines):
//   label_column = income
//   positive_token = >50K
//   negative_token = <=50K      (optional)
//   drop_columns = id, name     (optional)
struct IngestOptions {
  std::string label_column = "label";
  std::string positive_token = "1";
  std::string negative_token;  // empty: any single other token
  std::vector<std::string> drop_columns;
};

IngestOptions load_ingest_options(const std::string& path);

// Reads a headed CSV. Rows with a missing cell ("", "NA", "?", "nan") are
// dropped and counted in dropped_rows. Errors: "io-error", "empty-dataset",
// "missing-label-column", "non-numeric-column" (naming the column),
// "unknown-label".
Dataset ingest_csv(const std::string& path, const IngestOptions& opts);
Dataset ingest_csv(std::istream& in, const IngestOptions& opts, const std::string& name = "stream");

// Per-feature min-max scaling into [0,1]. Constant features map to 0 and are
// flagged in the record.
Dataset normalize(const Dataset& ds);

// Headed CSV: feature columns then "label" with values -1/+1.
void write_dataset_csv(std::ostream& out, const Dataset& ds);
void write_dataset_csv(const std::string& path, const Dataset& ds);

// Sidecar for the normalization record: one "name,min,max,constant" line per feature.
void write_normalization(const std::string& path, const Dataset& ds);
NormalizationRecord read_normalization(const std::string& path);

// Seeded shuffle split; the test part gets round(n * test_fraction) rows (at least one).
struct Split {
  Dataset train;
  Dataset test;
};
Split train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace wrckit
