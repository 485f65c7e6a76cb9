#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "procgeo/noise.hpp"
#include "procgeo/relational.hpp"

namespace procgeo {

struct IteratorConfig {
  Eigen::Index nodes = 100;
  double alpha = 0.1;
  std::size_t steps = 0;
  double start_scale = 1e-6;
  double sigma_floor_ratio = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const IteratorConfig&, const IteratorConfig&) = default;
};

/// B - alpha (B + B^-1) + w.
RelationalMatrix iterate_step(const RelationalMatrix& b, double alpha, const NoiseMatrix& w,
                              double sigma_floor_ratio);

/// Noise-free step.
RelationalMatrix iterate_step(const RelationalMatrix& b, double alpha, double sigma_floor_ratio);

struct MatrixSummary {
  double frobenius = 0.0;
  double max_abs = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  /// Unordered pairs with |B_ij| >= RecordPolicy::link_threshold.
  std::size_t links = 0;

  friend bool operator==(const MatrixSummary&, const MatrixSummary&) = default;
};

MatrixSummary summarize(const RelationalMatrix& b, double link_threshold);

struct RecordPolicy {
  /// Record step 0 and every `every`-th step after it; the final step is
  /// always recorded. Zero records only step 0 and the final step.
  std::size_t every = 1;
  bool keep_matrices = false;
  double link_threshold = 1.0;

  bool records(std::size_t step, std::size_t total_steps) const noexcept;
};

struct Snapshot {
  std::size_t step = 0;
  MatrixSummary summary;
  std::optional<RelationalMatrix> matrix;
};

struct IterationHistory {
  std::vector<Snapshot> snapshots;
  RelationalMatrix final_matrix = RelationalMatrix::zeros(2);
};

/// Called with each recorded (step, matrix) as the run progresses.
using StepObserver = std::function<void(std::size_t, const RelationalMatrix&)>;

/// Runs `config.steps` iterations from init_matrix. The start matrix draws from
/// `config.seed` and the noise from an independent stream derived from it.
IterationHistory run_iterator(const IteratorConfig& config, const NoiseSpec& noise,
                              const RecordPolicy& policy = {},
                              const StepObserver& observer = {});

}  // namespace procgeo
