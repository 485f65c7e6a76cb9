#include "procgeo/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "procgeo/error.hpp"

namespace procgeo {

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw NumericalError("cannot format value");
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ValidationError("not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV, expected header " + std::string(header));
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw ValidationError("CSV header '" + line + "' does not match '" + std::string(header) + "'");
  }
}

}  // namespace

void write_matrix_csv(std::ostream& out, const RelationalMatrix& b) {
  out << "i,j,value\n";
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    for (Eigen::Index j = i + 1; j < b.size(); ++j) {
      out << i << ',' << j << ',' << format_double(b(i, j)) << '\n';
    }
  }
}

RelationalMatrix read_matrix_csv(std::istream& in, Eigen::Index n) {
  expect_header(in, "i,j,value");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != 3) throw ValidationError("matrix CSV row needs 3 fields: " + line);
    const double i = parse_double(cells[0]);
    const double j = parse_double(cells[1]);
    if (i < 0 || j < 0 || i >= static_cast<double>(n) || j >= static_cast<double>(n) || !(i < j) ||
        i != std::floor(i) || j != std::floor(j)) {
      throw ValidationError("matrix CSV row has bad indices: " + line);
    }
    const double v = parse_double(cells[2]);
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = -v;
  }
  return RelationalMatrix(std::move(m));
}

void write_profile_csv(std::ostream& out, const ShellProfile& profile) {
  out << "k,D_k\n0,1\n";
  for (std::size_t k = 0; k < profile.shells.size(); ++k) {
    out << k + 1 << ',' << profile.shells[k] << '\n';
  }
}

std::vector<double> read_profile_csv(std::istream& in) {
  expect_header(in, "k,D_k");
  std::vector<double> shells;
  std::string line;
  std::size_t expected_k = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != 2) throw ValidationError("profile CSV row needs 2 fields: " + line);
    const double k = parse_double(cells[0]);
    if (k != static_cast<double>(expected_k)) {
      throw ValidationError("profile CSV rows must run k = 0, 1, 2, ...; got: " + line);
    }
    const double d = parse_double(cells[1]);
    if (expected_k == 0) {
      if (d != 1.0) throw ValidationError("profile CSV row k = 0 must have D_0 = 1");
    } else {
      shells.push_back(d);
    }
    ++expected_k;
  }
  if (expected_k == 0) throw ValidationError("profile CSV has no rows");
  return shells;
}

void write_curve_csv(std::ostream& out, const std::vector<DimensionCurvePoint>& curve) {
  out << "log10_p,d,L,log_prob\n";
  for (const auto& pt : curve) {
    out << format_double(std::log10(pt.p)) << ',' << format_double(pt.d) << ',' << pt.depth << ','
        << format_double(pt.log_prob) << '\n';
  }
}

}  // namespace procgeo
