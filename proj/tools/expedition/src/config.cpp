#include "expedition/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "procgeo/csv.hpp"
#include "procgeo/error.hpp"

namespace expedition {

using procgeo::ValidationError;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Iterate: return "iterate";
    case Mode::Maximize: return "maximize";
    case Mode::Fit: return "fit";
    case Mode::Sweep: return "sweep";
    case Mode::Emerge: return "emerge";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::Iterate, Mode::Maximize, Mode::Fit, Mode::Sweep, Mode::Emerge}) {
    if (name == to_string(m)) return m;
  }
  throw ValidationError("unknown mode '" + std::string(name) +
                        "' (expected iterate|maximize|fit|sweep|emerge)");
}

procgeo::IteratorConfig ExperimentConfig::iterator() const {
  return {static_cast<Eigen::Index>(nodes), alpha, steps, start_scale, sigma_floor_ratio, seed};
}

procgeo::NoiseSpec ExperimentConfig::noise() const {
  return {background_sigma, rare_prob, rare_lo, rare_hi};
}

procgeo::LikelihoodQuery ExperimentConfig::query() const { return {total_n, p}; }

procgeo::DepthRange ExperimentConfig::depth_range() const { return {depth_min, depth_max}; }

procgeo::ThresholdSpec ExperimentConfig::threshold_spec() const {
  if (threshold_kind == ThresholdKind::Quantile) return procgeo::QuantileThreshold{threshold};
  return procgeo::AbsoluteThreshold{threshold};
}

void ExperimentConfig::validate() const {
  iterator().validate();
  noise().validate();
  query().validate();
  if (threshold_kind == ThresholdKind::Absolute && !(threshold >= 0.0)) {
    throw ValidationError("threshold must be >= 0 for threshold_kind = absolute");
  }
  if (threshold_kind == ThresholdKind::Quantile && !(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("threshold must lie in (0, 1] for threshold_kind = quantile");
  }
  if (mode == Mode::Iterate && threshold_kind == ThresholdKind::Quantile) {
    throw ValidationError("threshold_kind = quantile is only meaningful in emerge mode");
  }
  if (!(jaccard > 0.0 && jaccard <= 1.0)) throw ValidationError("jaccard must lie in (0, 1]");
  if (sample_roots < 1) throw ValidationError("sample_roots must be >= 1");
  if (depth_min < 1 || depth_min > depth_max || depth_max + 1 > total_n) {
    throw ValidationError("depth_min/depth_max must satisfy 1 <= depth_min <= depth_max <= N - 1");
  }
  if (oracle_cap < 2 || oracle_cap > 26) throw ValidationError("oracle_cap must lie in [2, 26]");
  if (p_grid.empty()) throw ValidationError("p_grid must list at least one probability");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0 && p_grid[i] < 1.0)) {
      throw ValidationError("p_grid entries must lie in (0, 1)");
    }
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw ValidationError("p_grid must be strictly increasing");
    }
  }
  if (!(trim_floor >= 0.0)) throw ValidationError("trim_floor must be >= 0");
  if (mode == Mode::Fit && profile.empty()) {
    throw ValidationError("fit mode needs `profile = <path to k,D_k csv>`");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(std::string(key) + ": expected a non-negative integer, got '" +
                          std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  try {
    return procgeo::parse_double(text);
  } catch (const ValidationError&) {
    throw ValidationError(std::string(key) + ": expected a finite number, got '" +
                          std::string(text) + "'");
  }
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view)> parse;
  std::function<std::string(const ExperimentConfig&)> print;
  bool may_be_empty = false;
};

template <class T>
Field size_field(T ExperimentConfig::*member, const char* key) {
  return {[member, key](ExperimentConfig& c, std::string_view v) { c.*member = parse_int<T>(key, v); },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(double ExperimentConfig::*member, const char* key) {
  return {[member, key](ExperimentConfig& c, std::string_view v) { c.*member = parse_real(key, v); },
          [member](const ExperimentConfig& c) { return procgeo::format_double(c.*member); }};
}

// Emission order is the order of this list.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("mode", Field{[](ExperimentConfig& c, std::string_view v) { c.mode = parse_mode(v); },
                                 [](const ExperimentConfig& c) { return to_string(c.mode); }});
    t.emplace_back("seed", size_field(&ExperimentConfig::seed, "seed"));
    t.emplace_back("nodes", size_field(&ExperimentConfig::nodes, "nodes"));
    t.emplace_back("alpha", real_field(&ExperimentConfig::alpha, "alpha"));
    t.emplace_back("steps", size_field(&ExperimentConfig::steps, "steps"));
    t.emplace_back("start_scale", real_field(&ExperimentConfig::start_scale, "start_scale"));
    t.emplace_back("sigma_floor_ratio",
                   real_field(&ExperimentConfig::sigma_floor_ratio, "sigma_floor_ratio"));
    t.emplace_back("record_every", size_field(&ExperimentConfig::record_every, "record_every"));
    t.emplace_back("background_sigma",
                   real_field(&ExperimentConfig::background_sigma, "background_sigma"));
    t.emplace_back("rare_prob", real_field(&ExperimentConfig::rare_prob, "rare_prob"));
    t.emplace_back("rare_lo", real_field(&ExperimentConfig::rare_lo, "rare_lo"));
    t.emplace_back("rare_hi", real_field(&ExperimentConfig::rare_hi, "rare_hi"));
    t.emplace_back("threshold_kind",
                   Field{[](ExperimentConfig& c, std::string_view v) {
                           if (v == "absolute") {
                             c.threshold_kind = ThresholdKind::Absolute;
                           } else if (v == "quantile") {
                             c.threshold_kind = ThresholdKind::Quantile;
                           } else {
                             throw ValidationError("threshold_kind: expected absolute|quantile, got '" +
                                                   std::string(v) + "'");
                           }
                         },
                         [](const ExperimentConfig& c) {
                           return std::string(c.threshold_kind == ThresholdKind::Quantile ? "quantile"
                                                                                          : "absolute");
                         }});
    t.emplace_back("threshold", real_field(&ExperimentConfig::threshold, "threshold"));
    t.emplace_back("jaccard", real_field(&ExperimentConfig::jaccard, "jaccard"));
    t.emplace_back("sample_roots", size_field(&ExperimentConfig::sample_roots, "sample_roots"));
    t.emplace_back("N", size_field(&ExperimentConfig::total_n, "N"));
    t.emplace_back("p", real_field(&ExperimentConfig::p, "p"));
    t.emplace_back("depth_min", size_field(&ExperimentConfig::depth_min, "depth_min"));
    t.emplace_back("depth_max", size_field(&ExperimentConfig::depth_max, "depth_max"));
    t.emplace_back("oracle_cap", size_field(&ExperimentConfig::oracle_cap, "oracle_cap"));
    t.emplace_back("p_grid",
                   Field{[](ExperimentConfig& c, std::string_view v) {
                           c.p_grid.clear();
                           std::size_t start = 0;
                           for (;;) {
                             const auto comma = v.find(',', start);
                             c.p_grid.push_back(parse_real("p_grid", trim(v.substr(start, comma - start))));
                             if (comma == std::string_view::npos) break;
                             start = comma + 1;
                           }
                         },
                         [](const ExperimentConfig& c) {
                           std::string out;
                           for (std::size_t i = 0; i < c.p_grid.size(); ++i) {
                             if (i) out += ", ";
                             out += procgeo::format_double(c.p_grid[i]);
                           }
                           return out;
                         }});
    t.emplace_back("profile", Field{[](ExperimentConfig& c, std::string_view v) { c.profile = v; },
                                    [](const ExperimentConfig& c) { return c.profile; }, true});
    t.emplace_back("trim_floor", real_field(&ExperimentConfig::trim_floor, "trim_floor"));
    return t;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

ExperimentConfig parse_impl(std::string_view text, std::string_view origin,
                            const std::filesystem::path& base_dir, std::optional<Mode> requested) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + "expected `key = value`");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Field* field = find_field(key);
    if (!field) throw ValidationError(where + "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ValidationError(where + "duplicate key '" + std::string(key) + "'");
    }
    if (value.empty() && !field->may_be_empty) {
      throw ValidationError(where + "key '" + std::string(key) + "' has no value");
    }
    try {
      field->parse(config, value);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }

  if (requested) {
    if (seen.contains("mode") && config.mode != *requested) {
      throw ValidationError(std::string(origin) + ": config declares mode " + to_string(config.mode) +
                            " but " + to_string(*requested) + " was requested");
    }
    config.mode = *requested;
  } else if (!seen.contains("mode")) {
    throw ValidationError(std::string(origin) + ": missing key 'mode'");
  }
  const auto defaults = procgeo::DepthRange::defaults_for(std::max<std::size_t>(config.total_n, 2));
  if (!seen.contains("depth_min")) config.depth_min = defaults.min;
  if (!seen.contains("depth_max")) config.depth_max = defaults.max;
  if (!config.profile.empty() && !base_dir.empty()) {
    const std::filesystem::path prof(config.profile);
    if (prof.is_relative()) config.profile = (base_dir / prof).lexically_normal().string();
  }

  try {
    config.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(origin) + ": " + e.what());
  }
  return config;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view origin,
                              std::optional<Mode> requested) {
  return parse_impl(text, origin, {}, requested);
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Mode> requested) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_impl(buf.str(), path.string(), path.parent_path(), requested);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.print(config));
  return out;
}

std::string emit_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [key, value] : config_entries(config)) {
    out += key;
    out += value.empty() ? " =" : " = ";
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace expedition
