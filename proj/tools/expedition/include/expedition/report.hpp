#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expedition/experiment.hpp"

namespace expedition {

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

/// Output directory or file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whole report as JSON text: stable key order, shortest round-trip numbers.
/// The wall-clock time is left out so identical runs give identical bytes.
std::string report_json(const ExperimentReport& report);

/// Rebuilds the config from the `config` block of a JSON report.
ExperimentConfig config_from_report_json(std::string_view json);

/// Writes `config.txt` plus report.json (Json) or the mode's CSV tables
/// (Csv) into `dir`, creating it if needed. Returns the paths written.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, Format format,
                                               const std::filesystem::path& dir);

}  // namespace expedition
