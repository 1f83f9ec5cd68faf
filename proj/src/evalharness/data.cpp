#include "wrckit/evalharness/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"
#include "wrckit/core/rng.hpp"

namespace wrckit {
namespace {

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "na" || cell == "?" || cell == "nan" || cell == "NaN";
}

// Splits one CSV record; double quotes group commas and "" escapes a quote.
std::vector<std::string> parse_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parses_as_double(const std::string& s, double& out) {
  try {
    out = parse_double(s);
    return std::isfinite(out);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

IngestOptions load_ingest_options(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  IngestOptions opts;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("invalid-config", "expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "label_column") {
      opts.label_column = value;
    } else if (key == "positive_token") {
      opts.positive_token = value;
    } else if (key == "negative_token") {
      opts.negative_token = value;
    } else if (key == "drop_columns") {
      opts.drop_columns.clear();
      for (const auto& c : split(value, ',')) {
        if (!trim(c).empty()) opts.drop_columns.push_back(trim(c));
      }
    } else {
      throw Error("invalid-config", "unknown dataset key " + key);
    }
  }
  return opts;
}

Dataset ingest_csv(const std::string& path, const IngestOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return ingest_csv(in, opts, name);
}

Dataset ingest_csv(std::istream& in, const IngestOptions& opts, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty-dataset", name + " has no header");
  const std::vector<std::string> header = parse_record(line);
  std::size_t label_idx = header.size();
  std::vector<std::size_t> features;
  Dataset ds;
  ds.name = name;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == opts.label_column) {
      label_idx = j;
    } else if (std::find(opts.drop_columns.begin(), opts.drop_columns.end(), header[j]) == opts.drop_columns.end()) {
      features.push_back(j);
      ds.feature_names.push_back(header[j]);
    }
  }
  if (label_idx == header.size()) throw Error("missing-label-column", opts.label_column);
  if (features.empty()) throw Error("invalid-dataset", "no feature columns");

  std::string negative = opts.negative_token;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = parse_record(line);
    if (cells.size() != header.size()) {
      throw Error("invalid-dataset", "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                         " cells, expected " + std::to_string(header.size()));
    }
    bool missing = is_missing(cells[label_idx]);
    for (std::size_t j : features) missing = missing || is_missing(cells[j]);
    if (missing) {
      ++ds.dropped_rows;
      continue;
    }
    Instance row;
    row.reserve(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      double v = 0.0;
      if (!parses_as_double(cells[features[f]], v)) throw Error("non-numeric-column", ds.feature_names[f]);
      row.push_back(v);
    }
    const std::string& token = cells[label_idx];
    int label = 0;
    if (token == opts.positive_token) {
      label = 1;
    } else if (negative.empty() || token == negative) {
      negative = token;
      label = -1;
    } else {
      throw Error("unknown-label", token);
    }
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(label);
  }
  if (ds.rows.empty()) throw Error("empty-dataset", name + " has no usable rows");
  ds.validate();
  return ds;
}

Dataset normalize(const Dataset& ds) {
  ds.validate();
  const std::size_t k = ds.dim();
  NormalizationRecord rec;
  rec.min.assign(k, 0.0);
  rec.max.assign(k, 0.0);
  rec.constant.assign(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    double lo = ds.rows.front()[j];
    double hi = lo;
    for (const auto& row : ds.rows) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    rec.min[j] = lo;
    rec.max[j] = hi;
    rec.constant[j] = !(hi > lo);
  }
  Dataset out = ds;
  for (auto& row : out.rows) {
    row = rec.apply(row);
    vec::clip_unit(row);  // guards against rounding just past 1
  }
  out.normalization = std::move(rec);
  return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  for (std::size_t j = 0; j < ds.dim(); ++j) {
    out << (j < ds.feature_names.size() ? ds.feature_names[j] : "x" + std::to_string(j)) << ',';
  }
  out << "label\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.rows[i]) out << format_double(v) << ',';
    out << ds.labels[i] << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot write " + path);
  write_dataset_csv(out, ds);
}

void write_normalization(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot write " + path);
  const auto& rec = ds.normalization;
  for (std::size_t j = 0; j < rec.min.size(); ++j) {
    out << (j < ds.feature_names.size() ? ds.feature_names[j] : "x" + std::to_string(j)) << ','
        << format_double(rec.min[j]) << ',' << format_double(rec.max[j]) << ',' << (rec.constant[j] ? 1 : 0)
        << '\n';
  }
}

NormalizationRecord read_normalization(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  NormalizationRecord rec;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = parse_record(line);
    if (cells.size() != 4) throw Error("invalid-normalization", line);
    rec.min.push_back(parse_double(cells[1]));
    rec.max.push_back(parse_double(cells[2]));
    rec.constant.push_back(cells[3] == "1");
  }
  return rec;
}

Split train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  ds.validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("invalid-config", "test fraction must be in (0,1)");
  if (ds.size() < 2) throw Error("invalid-dataset", "need at least two rows to split");
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(RngHandle{seed, 0x53504c4954});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(ds.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, ds.size() - 1);
  Split s;
  s.test = ds.subset({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test)});
  s.train = ds.subset({order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end()});
  return s;
}

}  // namespace wrckit
