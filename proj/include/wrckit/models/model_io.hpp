#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "wrckit/models/classifier.hpp"

namespace wrckit {

// Text model format:
//
//   wrckit-model v1 <kind> <K> <H1> <H2>
//   <whitespace-separated decimal values>
//
// Value order per kind:
//   mlp       W1 (H1 x K, row-major), b1 (H1), W2 (H2 x H1), b2 (H2), w3 (H2), b3
//   linear    w (K), b                       H1 = H2 = 0
//   radial    center (K), radius             H1 = H2 = 0
//   constant  value                          H1 = H2 = 0
//
// Values are written in shortest round-trip form, so reloading reproduces
// every weight bit for bit.
void save_model(const Classifier& model, std::ostream& out);
void save_model(const Classifier& model, const std::string& path);
std::shared_ptr<Classifier> load_model(std::istream& in);
std::shared_ptr<Classifier> load_model(const std::string& path);

}  // namespace wrckit
