#pragma once

#include <string>
#include <vector>

namespace wrckit {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);
// Parses a double written by format_double (or any plain decimal); throws
// Error("parse-error") on trailing junk.
double parse_double(const std::string& s);
std::string join_doubles(const std::vector<double>& values, char sep);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace wrckit
