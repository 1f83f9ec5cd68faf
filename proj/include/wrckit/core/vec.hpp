#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wrckit {

// A point of the instance space. After normalization every coordinate lies in [0,1].
using Instance = std::vector<double>;
using ConstVec = std::span<const double>;

namespace vec {

double dot(ConstVec a, ConstVec b);
double norm2(ConstVec a);
double norm_inf(ConstVec a);
Instance sub(ConstVec a, ConstVec b);
Instance add_scaled(ConstVec a, double s, ConstVec b);  // a + s*b
Instance lerp(ConstVec a, ConstVec b, double t);       // a + t*(b-a)
void clip_unit(Instance& x);
bool in_unit_cube(ConstVec x);
// Lexicographic strict ordering, used for deterministic tie-breaks.
bool lex_less(ConstVec a, ConstVec b);
void require_same_dim(std::size_t a, std::size_t b, const char* what);

}  // namespace vec
}  // namespace wrckit
