#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "expedition/config.hpp"
#include "procgeo/dimension.hpp"
#include "procgeo/iterator.hpp"
#include "procgeo/likelihood.hpp"

namespace expedition {

struct RunOptions {
  /// Sweep points and per-depth maximization on worker threads. Output is the
  /// same either way; `--serial` turns it off for the reference mode.
  bool parallel = true;
};

struct MaximizeReport {
  procgeo::MaximizationResult optimizer;
  std::optional<procgeo::MaximizationResult> oracle;
  /// |optimizer - oracle| log_prob, when the oracle ran.
  std::optional<double> oracle_gap;
  std::optional<procgeo::DimensionFit> fit;
};

struct FitReport {
  std::size_t depth = 0;
  procgeo::DimensionFit fit;
};

struct GebitCensus {
  std::size_t step = 0;
  /// Gebits are components with at least two nodes.
  std::vector<std::size_t> sizes;
  std::size_t non_isolated = 0;
  std::size_t links = 0;
  /// Median-root dimension of the largest gebit when it is big and deep enough.
  std::optional<double> largest_d;
  /// Tracking ids, parallel to `sizes`.
  std::vector<std::size_t> ids;
};

struct GebitLifetime {
  std::size_t id = 0;
  std::size_t birth_step = 0;
  std::size_t last_step = 0;
  /// Recorded steps at which the gebit was seen.
  std::size_t sightings = 0;
  std::size_t max_size = 0;
  bool alive_at_end = false;
};

struct SizeDistribution {
  /// Gebit size -> count, pooled over all recorded steps.
  std::map<std::size_t, std::size_t> histogram;
  /// Discrete power-law exponent estimate for sizes >= 2; descriptive only.
  std::optional<double> power_law_exponent;
};

struct EmergeReport {
  procgeo::MatrixSummary initial;
  procgeo::MatrixSummary final_summary;
  std::vector<GebitCensus> census;
  std::vector<GebitLifetime> lifetimes;
  SizeDistribution sizes;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string tool_version;
  /// Printed on the console only; files stay byte-identical across runs.
  double wall_seconds = 0.0;

  std::optional<procgeo::IterationHistory> history;
  std::optional<MaximizeReport> maximize;
  std::optional<FitReport> fit;
  std::vector<procgeo::DimensionCurvePoint> curve;
  std::optional<EmergeReport> emerge;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Matches current gebits to previous ones by node-set Jaccard overlap.
/// Returns for each current gebit the index of its predecessor, if any.
/// Pairs are claimed greedily by descending overlap, ties to lower indices,
/// and each predecessor is claimed at most once.
std::vector<std::optional<std::size_t>> match_gebits(
    const std::vector<std::vector<procgeo::NodeId>>& previous,
    const std::vector<std::vector<procgeo::NodeId>>& current, double min_jaccard,
    std::size_t node_count);

/// Continuous-approximation maximum-likelihood exponent over sizes >= s_min.
std::optional<double> power_law_exponent(const std::map<std::size_t, std::size_t>& histogram,
                                         std::size_t s_min = 2);

}  // namespace expedition
