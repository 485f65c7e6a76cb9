#include "procgeo/relational.hpp"

#include <algorithm>
#include <string>

#include "procgeo/error.hpp"

namespace procgeo {
namespace {

void check_shape(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) {
    throw ValidationError("relational matrix must be square, got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  if (rows < 2) throw ValidationError("degenerate size: need at least 2 nodes");
  if (rows % 2 != 0) {
    throw ValidationError("odd dimension " + std::to_string(rows) +
                          ": antisymmetric matrices of odd size are singular");
  }
}

// Relative size of the smallest singular value below which a start matrix is
// treated as singular and redrawn.
constexpr double kStartRcond = 1e-12;
constexpr int kMaxStartAttempts = 64;

}  // namespace

RelationalMatrix::RelationalMatrix(Eigen::MatrixXd entries) {
  check_shape(entries.rows(), entries.cols());
  const double defect = antisymmetry_defect(entries);
  if (!(defect <= kAntisymmetryTolerance)) {
    throw ValidationError("matrix is not antisymmetric: max|B + B^T| = " + std::to_string(defect));
  }
  entries_ = 0.5 * (entries - entries.transpose());
}

RelationalMatrix RelationalMatrix::zeros(Eigen::Index n) {
  check_shape(n, n);
  return RelationalMatrix(Eigen::MatrixXd::Zero(n, n), Unchecked{});
}

RelationalMatrix antisymmetric_part(const Eigen::MatrixXd& m) {
  check_shape(m.rows(), m.cols());
  Eigen::MatrixXd a = 0.5 * (m - m.transpose());
  return RelationalMatrix(std::move(a), RelationalMatrix::Unchecked{});
}

double antisymmetry_defect(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

RelationalMatrix init_matrix(Eigen::Index n, double start_scale, std::uint64_t seed) {
  check_shape(n, n);
  if (!(start_scale > 0.0)) throw ValidationError("start_scale must be > 0");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < kMaxStartAttempts; ++attempt) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = unit(rng);
        m(i, j) = v;
        m(j, i) = -v;
      }
    }
    const double peak = m.cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    m *= start_scale / peak;
    RelationalMatrix b = antisymmetric_part(m);
    const auto sv = singular_values(b);
    if (sv.back() > kStartRcond * sv.front()) return b;
  }
  throw NumericalError("could not draw a nonsingular start matrix");
}

std::vector<double> singular_values(const RelationalMatrix& b) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(b.dense());
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

RelationalMatrix safe_inverse(const RelationalMatrix& b, double sigma_floor_ratio) {
  if (!(sigma_floor_ratio > 0.0 && sigma_floor_ratio < 1.0)) {
    throw ValidationError("sigma_floor_ratio must lie in (0, 1)");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(b.dense(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double sigma_max = s(0);
  if (!(sigma_max > 0.0)) throw NumericalError("uninvertible zero matrix");
  const double floor = sigma_floor_ratio * sigma_max;
  const Eigen::VectorXd inv = s.unaryExpr([floor](double v) { return 1.0 / std::max(v, floor); });
  const Eigen::MatrixXd result = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return antisymmetric_part(result);
}

}  // namespace procgeo
