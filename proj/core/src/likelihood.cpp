#include "procgeo/likelihood.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "procgeo/error.hpp"

namespace procgeo {
namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("link probability p must lie in (0, 1)");
}

void check_shells(std::span<const double> shells) {
  if (shells.empty()) throw ValidationError("profile needs depth >= 1");
  for (std::size_t k = 0; k < shells.size(); ++k) {
    if (!(shells[k] >= 1.0) || !std::isfinite(shells[k])) {
      throw ValidationError("shell D_" + std::to_string(k + 1) + " must be a finite value >= 1");
    }
  }
}

// ln(1 - q^x) for ln q < 0, x > 0.
double log1m_qpow(double x, double log_q) { return std::log(-std::expm1(x * log_q)); }

// d/dx ln(1 - q^x) = -ln q / (q^-x - 1).
double dlog1m_qpow(double x, double log_q) { return -log_q / std::expm1(-x * log_q); }

}  // namespace

void LikelihoodQuery::validate() const {
  if (total_n < 2) throw ValidationError("N must be >= 2");
  check_p(link_prob);
}

double ContinuousProfile::total_n() const {
  double n = 1.0;
  for (double d : shells) n += d;
  return n;
}

double log_likelihood(std::span<const double> shells, double p) {
  check_p(p);
  check_shells(shells);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);

  double value = shells[0] * log_p;
  for (double d : shells) value -= boost::math::lgamma(d + 1.0);

  double inner = 1.0;  // sum_{j < i} D_j, starting with D_0 = 1
  for (std::size_t t = 0; t + 1 < shells.size(); ++t) {
    value += shells[t + 1] * (inner * log_q + log1m_qpow(shells[t], log_q));
    inner += shells[t];
  }
  return value;
}

double log_likelihood(const ShellProfile& profile, double p) {
  profile.validate();
  const auto reals = profile.as_reals();
  return log_likelihood(std::span<const double>(reals), p);
}

double log_likelihood(const ContinuousProfile& profile, double p) {
  return log_likelihood(std::span<const double>(profile.shells), p);
}

std::vector<double> gradient_log_likelihood(std::span<const double> shells, double p) {
  check_p(p);
  check_shells(shells);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const std::size_t depth = shells.size();

  // tail[m] = sum_{u >= m} shells[u]
  std::vector<double> tail(depth + 1, 0.0);
  for (std::size_t m = depth; m-- > 0;) tail[m] = tail[m + 1] + shells[m];

  std::vector<double> grad(depth, 0.0);
  double inner = 1.0;  // 1 + sum_{u < m-1} shells[u]
  for (std::size_t m = 0; m < depth; ++m) {
    double g = -boost::math::digamma(shells[m] + 1.0);
    if (m == 0) g += log_p;
    if (m >= 1) {
      g += inner * log_q + log1m_qpow(shells[m - 1], log_q);
      inner += shells[m - 1];
    }
    if (m + 1 < depth) g += shells[m + 1] * dlog1m_qpow(shells[m], log_q);
    if (m + 2 < depth) g += log_q * tail[m + 2];
    grad[m] = g;
  }
  return grad;
}

std::vector<double> gradient_log_likelihood(const ContinuousProfile& profile, double p) {
  return gradient_log_likelihood(std::span<const double>(profile.shells), p);
}

std::vector<double> hessian_log_likelihood(std::span<const double> shells, double p) {
  check_p(p);
  check_shells(shells);
  const double log_q = std::log1p(-p);
  const double c = -log_q;
  const std::size_t depth = shells.size();
  std::vector<double> h(depth * depth, 0.0);
  auto at = [&](std::size_t a, std::size_t b) -> double& { return h[a * depth + b]; };

  for (std::size_t a = 0; a < depth; ++a) {
    for (std::size_t b = 0; b < depth; ++b) {
      if ((a > b ? a - b : b - a) >= 2) at(a, b) = log_q;
    }
    at(a, a) = -boost::math::trigamma(shells[a] + 1.0);
  }
  for (std::size_t t = 0; t + 1 < depth; ++t) {
    const double e = std::expm1(c * shells[t]);
    at(t, t) += shells[t + 1] * (-c * c * (e + 1.0) / (e * e));
    const double cross = dlog1m_qpow(shells[t], log_q);
    at(t, t + 1) += cross;
    at(t + 1, t) += cross;
  }
  return h;
}

std::string to_string(MaximizationMethod m) {
  switch (m) {
    case MaximizationMethod::Enumeration:
      return "enumeration";
    case MaximizationMethod::RelaxationRefinement:
      return "relaxation+refinement";
  }
  return "unknown";
}

}  // namespace procgeo
