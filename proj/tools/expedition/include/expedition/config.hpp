#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procgeo/graph.hpp"
#include "procgeo/iterator.hpp"
#include "procgeo/likelihood.hpp"
#include "procgeo/noise.hpp"

namespace expedition {

enum class Mode { Iterate, Maximize, Fit, Sweep, Emerge };

std::string to_string(Mode m);
/// Throws procgeo::ValidationError on an unknown name.
Mode parse_mode(std::string_view name);

enum class ThresholdKind { Absolute, Quantile };

/// Every key has a value after loading; nothing stays "unset".
struct ExperimentConfig {
  Mode mode = Mode::Maximize;
  std::uint64_t seed = 0;

  // iterator
  std::size_t nodes = 100;
  double alpha = 0.1;
  std::size_t steps = 100;
  double start_scale = 1e-6;
  double sigma_floor_ratio = 1e-8;
  std::size_t record_every = 10;

  // noise
  double background_sigma = 0.0;
  double rare_prob = 0.0;
  double rare_lo = 1.0;
  double rare_hi = 1.0;

  // link extraction
  ThresholdKind threshold_kind = ThresholdKind::Absolute;
  double threshold = 1.0;
  double jaccard = 0.5;
  std::size_t sample_roots = 32;

  // likelihood
  std::size_t total_n = 5000;
  double p = 1e-6;
  std::size_t depth_min = 2;
  std::size_t depth_max = 120;
  std::size_t oracle_cap = procgeo::kDefaultOracleCap;
  std::vector<double> p_grid{1e-7, 1e-6, 1e-5, 1e-4, 1e-3};

  // fitting
  std::string profile;
  double trim_floor = 1.0;

  procgeo::IteratorConfig iterator() const;
  procgeo::NoiseSpec noise() const;
  procgeo::LikelihoodQuery query() const;
  procgeo::DepthRange depth_range() const;
  procgeo::ThresholdSpec threshold_spec() const;

  /// Checks every field against its module-level constraint.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the `key = value` text format. `#` starts a comment. Depth bounds
/// default from N when absent. `origin` names the source in error messages.
/// With `requested` set, a `mode` key in the text must agree with it and may
/// be left out; otherwise `mode` is required.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>",
                              std::optional<Mode> requested = {});
/// Relative `profile` paths resolve against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Mode> requested = {});

/// Effective config, one `key = value` per line in a fixed order. Reloads to
/// an equal config.
std::string emit_config(const ExperimentConfig& config);

/// Ordered (key, value-text) pairs, as written by emit_config.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

}  // namespace expedition
