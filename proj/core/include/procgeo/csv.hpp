#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "procgeo/dimension.hpp"
#include "procgeo/graph.hpp"
#include "procgeo/relational.hpp"

namespace procgeo {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of a whole string as a double; throws ValidationError.
double parse_double(std::string_view text);

/// Header `i,j,value`; only i < j entries.
void write_matrix_csv(std::ostream& out, const RelationalMatrix& b);
RelationalMatrix read_matrix_csv(std::istream& in, Eigen::Index n);

/// Header `k,D_k`; row k = 0 carries D_0 = 1.
void write_profile_csv(std::ostream& out, const ShellProfile& profile);
/// Reads `k,D_k` rows, k must run 0..L with D_0 == 1. Values may be reals.
std::vector<double> read_profile_csv(std::istream& in);

/// Header `log10_p,d,L,log_prob`.
void write_curve_csv(std::ostream& out, const std::vector<DimensionCurvePoint>& curve);

}  // namespace procgeo
