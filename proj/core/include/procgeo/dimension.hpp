#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "procgeo/graph.hpp"
#include "procgeo/likelihood.hpp"

namespace procgeo {

struct DimensionFit {
  double d = 0.0;
  double log_amplitude = 0.0;
  /// RMS of ln D_k - (log_amplitude + (d - 1) ln sin(pi k / L)).
  double residual = 0.0;
  std::size_t points_used = 0;
};

/// Shells below `floor` are dropped from both ends before fitting.
struct TrimPolicy {
  double floor = 1.0;
  friend bool operator==(const TrimPolicy&, const TrimPolicy&) = default;
};

/// Fits D_k ~ A sin^(d-1)(pi k / L) by least squares in the log domain over
/// k = 1..L-1, L = shells.size().
DimensionFit fit_dimension(std::span<const double> shells, TrimPolicy trim = {});
DimensionFit fit_dimension(const ShellProfile& profile, TrimPolicy trim = {});

struct DimensionCurvePoint {
  double p = 0.0;
  double d = 0.0;
  std::size_t depth = 0;
  double log_prob = 0.0;
  ShellProfile profile;
};

DimensionCurvePoint dimension_of_p(std::size_t total_n, double p, DepthRange range,
                                   TrimPolicy trim = {}, const MaximizeOptions& options = {});

struct RootPolicy {
  /// Fixed root (global id). When empty, roots are sampled.
  std::optional<NodeId> fixed_root;
  /// Sample min(|nodes|, sample_roots) roots evenly spaced over sorted ids.
  std::size_t sample_roots = 32;
};

struct EmpiricalDimension {
  DimensionFit fit;  ///< median-d fit (or the fixed-root fit)
  std::vector<double> per_root_d;
};

/// Shell profile + fit per root, aggregated by the median of d.
EmpiricalDimension empirical_dimension(const Gebit& gebit, const RootPolicy& roots = {},
                                       TrimPolicy trim = {});

}  // namespace procgeo
