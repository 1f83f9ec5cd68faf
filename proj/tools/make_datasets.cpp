// Writes the bundled synthetic benchmark sets as headed CSV files.
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wrckit/core/error.hpp"
#include "wrckit/evalharness/data.hpp"
#include "wrckit/evalharness/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write synthetic datasets (two-moons, circles, xor, linear) as CSV", "wrckit-datasets"};
  std::string dir = "data";
  std::size_t rows = 600;
  std::uint64_t seed = 1;
  app.add_option("-o,--out-dir", dir, "output directory")->capture_default_str();
  app.add_option("-n,--rows", rows, "rows per dataset")->capture_default_str();
  app.add_option("-s,--seed", seed, "generator seed")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    std::filesystem::create_directories(dir);
    for (const std::string& name : wrckit::synthetic_names()) {
      const std::string path = dir + "/" + name + ".csv";
      wrckit::write_dataset_csv(path, wrckit::make_synthetic(name, rows, seed));
      std::cout << path << '\n';
    }
  } catch (const wrckit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
