#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace procgeo {

/// Antisymmetric matrix of link strengths between an even number of nodes.
///
/// Construction checks B + B^T against kAntisymmetryTolerance and then
/// projects onto the exactly antisymmetric part, so every live instance has
/// B(i, j) == -B(j, i) bit for bit and a zero diagonal.
class RelationalMatrix {
 public:
  static constexpr double kAntisymmetryTolerance = 1e-12;

  explicit RelationalMatrix(Eigen::MatrixXd entries);

  /// n x n zero matrix.
  static RelationalMatrix zeros(Eigen::Index n);

  Eigen::Index size() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  const Eigen::MatrixXd& dense() const noexcept { return entries_; }

  double max_abs() const { return entries_.cwiseAbs().maxCoeff(); }
  bool all_finite() const { return entries_.allFinite(); }

  friend bool operator==(const RelationalMatrix& a, const RelationalMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_ == b.entries_;
  }

 private:
  struct Unchecked {};
  RelationalMatrix(Eigen::MatrixXd entries, Unchecked) : entries_(std::move(entries)) {}

  Eigen::MatrixXd entries_;

  friend RelationalMatrix antisymmetric_part(const Eigen::MatrixXd& m);
};

/// (M - M^T) / 2 for any square even-sized M.
RelationalMatrix antisymmetric_part(const Eigen::MatrixXd& m);

/// Max absolute entry of M + M^T.
double antisymmetry_defect(const Eigen::MatrixXd& m);

/// Small random nonsingular start matrix with max|B_ij| == start_scale.
RelationalMatrix init_matrix(Eigen::Index n, double start_scale, std::uint64_t seed);

/// Descending singular spectrum. Antisymmetric spectra come in equal pairs.
std::vector<double> singular_values(const RelationalMatrix& b);

/// Inverse with every singular value floored at sigma_floor_ratio * sigma_max.
RelationalMatrix safe_inverse(const RelationalMatrix& b, double sigma_floor_ratio);

}  // namespace procgeo
