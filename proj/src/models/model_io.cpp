#include "wrckit/models/model_io.hpp"

#include <fstream>
#include <sstream>

#include "wrckit/core/error.hpp"
#include "wrckit/core/format.hpp"
#include "wrckit/models/mlp.hpp"

namespace wrckit {
namespace {

constexpr const char* kMagic = "wrckit-model";
constexpr const char* kVersion = "v1";

void write_values(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]) << (i + 1 == values.size() ? '\n' : ' ');
  }
}

std::vector<double> read_values(std::istream& in, std::size_t count) {
  std::vector<double> values;
  values.reserve(count);
  std::string token;
  while (values.size() < count && in >> token) values.push_back(parse_double(token));
  if (values.size() != count) {
    throw Error("invalid-model-file",
                "expected " + std::to_string(count) + " values, got " + std::to_string(values.size()));
  }
  if (in >> token) throw Error("invalid-model-file", "trailing data after weights");
  return values;
}

}  // namespace

void save_model(const Classifier& model, std::ostream& out) {
  const std::size_t k = model.dim();
  if (const auto* mlp = dynamic_cast<const MlpModel*>(&model)) {
    out << kMagic << ' ' << kVersion << " mlp " << k << ' ' << mlp->hidden1() << ' ' << mlp->hidden2() << '\n';
    write_values(out, mlp->parameters());
  } else if (const auto* lin = dynamic_cast<const LinearModel*>(&model)) {
    out << kMagic << ' ' << kVersion << " linear " << k << " 0 0\n";
    std::vector<double> v = lin->weights();
    v.push_back(lin->bias());
    write_values(out, v);
  } else if (const auto* rad = dynamic_cast<const RadialModel*>(&model)) {
    out << kMagic << ' ' << kVersion << " radial " << k << " 0 0\n";
    std::vector<double> v = rad->center();
    v.push_back(rad->radius());
    write_values(out, v);
  } else if (const auto* cst = dynamic_cast<const ConstantModel*>(&model)) {
    out << kMagic << ' ' << kVersion << " constant " << k << " 0 0\n";
    write_values(out, {cst->value()});
  } else {
    throw Error("unsupported-model", "cannot serialize model kind '" + model.kind() + "'");
  }
  if (!out) throw Error("io-error", "failed writing model");
}

void save_model(const Classifier& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot open '" + path + "' for writing");
  save_model(model, out);
}

std::shared_ptr<Classifier> load_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error("invalid-model-file", "missing header");
  std::istringstream hs(header);
  std::string magic, version, kind;
  std::size_t k = 0, h1 = 0, h2 = 0;
  if (!(hs >> magic >> version >> kind >> k >> h1 >> h2) || magic != kMagic) {
    throw Error("invalid-model-file", "bad header '" + header + "'");
  }
  if (version != kVersion) throw Error("invalid-model-file", "unsupported version '" + version + "'");
  if (k == 0) throw Error("invalid-model-file", "zero input dimension");

  if (kind == "mlp") {
    auto model = std::make_shared<MlpModel>(k, h1, h2);
    model->set_parameters(read_values(in, model->parameter_count()));
    return model;
  }
  if (kind == "linear") {
    auto v = read_values(in, k + 1);
    const double b = v.back();
    v.pop_back();
    return std::make_shared<LinearModel>(std::move(v), b);
  }
  if (kind == "radial") {
    auto v = read_values(in, k + 1);
    const double r = v.back();
    v.pop_back();
    return std::make_shared<RadialModel>(std::move(v), r);
  }
  if (kind == "constant") {
    const auto v = read_values(in, 1);
    return std::make_shared<ConstantModel>(k, v[0]);
  }
  throw Error("invalid-model-file", "unknown model kind '" + kind + "'");
}

std::shared_ptr<Classifier> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open model '" + path + "'");
  return load_model(in);
}

}  // namespace wrckit
