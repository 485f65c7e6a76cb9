#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "procgeo/graph.hpp"

namespace procgeo {

/// Fixed gebit size and rare-link probability. q = 1 - p.
struct LikelihoodQuery {
  std::size_t total_n = 2;
  double link_prob = 0.5;

  void validate() const;
};

/// Relaxed shell counts: all d_k >= 1, sum d_k == N - 1.
struct ContinuousProfile {
  std::vector<double> shells;

  std::size_t depth() const noexcept { return shells.size(); }
  double total_n() const;
};

/// Log of the spanning-tree shape probability with the (L, D)-independent
/// normalization dropped:
///
///   D_1 ln p - sum_k lnGamma(D_k + 1)
///     + sum_{i=1}^{L-1} D_{i+1} [ (sum_{j<i} D_j) ln q + ln(1 - q^{D_i}) ]
///
/// with D_0 = 1. Shells may be non-integer; every one must be >= 1.
double log_likelihood(std::span<const double> shells, double p);
double log_likelihood(const ShellProfile& profile, double p);
double log_likelihood(const ContinuousProfile& profile, double p);

/// d/dd_k of log_likelihood, analytic (digamma for the factorial terms).
std::vector<double> gradient_log_likelihood(std::span<const double> shells, double p);
std::vector<double> gradient_log_likelihood(const ContinuousProfile& profile, double p);

/// Dense Hessian of log_likelihood, row-major depth x depth.
std::vector<double> hessian_log_likelihood(std::span<const double> shells, double p);

enum class MaximizationMethod { Enumeration, RelaxationRefinement };
std::string to_string(MaximizationMethod m);

struct DepthRange {
  std::size_t min = 2;
  std::size_t max = 120;

  /// [min(2, N-1), min(N-1, 120)].
  static DepthRange defaults_for(std::size_t total_n);
  friend bool operator==(const DepthRange&, const DepthRange&) = default;
};

struct MaximizationResult {
  std::size_t total_n = 0;
  double link_prob = 0.0;
  ShellProfile profile;
  double log_prob = 0.0;
  DepthRange depth_swept;
  MaximizationMethod method = MaximizationMethod::RelaxationRefinement;
};

struct MaximizeOptions {
  std::size_t max_ascent_iterations = 20000;
  /// Stop when the largest projected move falls below this.
  double ascent_tolerance = 1e-10;
  /// Stop when the objective spread over the last 10 accepted steps falls
  /// below this, relative to max(1, |objective|).
  double objective_tolerance = 1e-11;
  /// Evaluate depths on worker threads. Results are identical either way.
  bool parallel = false;
};

/// Best continuous profile of depth L found by projected Newton ascent on
/// {d_k >= 1, sum d_k = N - 1}, started from a normalized sin^2 shape.
ContinuousProfile relax_profile(const LikelihoodQuery& query, std::size_t depth,
                                const MaximizeOptions& options = {});

/// Largest-remainder rounding that keeps sum == N - 1 and every D_k >= 1.
ShellProfile round_profile(const ContinuousProfile& relaxed, std::size_t total_n);

/// Integer hill-climb over single-node transfers between shells. Never
/// returns a profile with lower log_likelihood than its start.
ShellProfile refine_profile(ShellProfile start, double p);

/// Maximizes over every depth in `range`; ties go to the smallest depth.
MaximizationResult maximize_profile(const LikelihoodQuery& query, DepthRange range,
                                    const MaximizeOptions& options = {});
MaximizationResult maximize_profile(const LikelihoodQuery& query);

inline constexpr std::size_t kDefaultOracleCap = 14;

/// Exact argmax over all 2^(N-2) compositions of N - 1.
MaximizationResult brute_force_profile(const LikelihoodQuery& query,
                                       std::size_t cap = kDefaultOracleCap);
/// Same, restricted to compositions whose depth lies in `range`.
MaximizationResult brute_force_profile(const LikelihoodQuery& query, DepthRange range,
                                       std::size_t cap = kDefaultOracleCap);

}  // namespace procgeo
