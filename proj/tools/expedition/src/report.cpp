#include "expedition/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "procgeo/csv.hpp"
#include "procgeo/error.hpp"

namespace expedition {

using json = nlohmann::ordered_json;

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw procgeo::ValidationError("unknown format '" + std::string(name) + "' (expected csv|json)");
}

namespace {

constexpr double kOracleTolerance = 1e-9;

// Config values keep their native JSON types; integers stay integers.
json config_json(const ExperimentConfig& c) {
  json out = json::object();
  out["mode"] = to_string(c.mode);
  out["seed"] = c.seed;
  out["nodes"] = c.nodes;
  out["alpha"] = c.alpha;
  out["steps"] = c.steps;
  out["start_scale"] = c.start_scale;
  out["sigma_floor_ratio"] = c.sigma_floor_ratio;
  out["record_every"] = c.record_every;
  out["background_sigma"] = c.background_sigma;
  out["rare_prob"] = c.rare_prob;
  out["rare_lo"] = c.rare_lo;
  out["rare_hi"] = c.rare_hi;
  out["threshold_kind"] = c.threshold_kind == ThresholdKind::Quantile ? "quantile" : "absolute";
  out["threshold"] = c.threshold;
  out["jaccard"] = c.jaccard;
  out["sample_roots"] = c.sample_roots;
  out["N"] = c.total_n;
  out["p"] = c.p;
  out["depth_min"] = c.depth_min;
  out["depth_max"] = c.depth_max;
  out["oracle_cap"] = c.oracle_cap;
  out["p_grid"] = c.p_grid;
  out["profile"] = c.profile;
  out["trim_floor"] = c.trim_floor;
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json summary_json(const procgeo::MatrixSummary& s) {
  return {{"frobenius", s.frobenius}, {"max_abs", s.max_abs}, {"sigma_max", s.sigma_max},
          {"sigma_min", s.sigma_min}, {"links", s.links}};
}

json maximization_json(const procgeo::MaximizationResult& r) {
  return {{"N", r.total_n},
          {"p", r.link_prob},
          {"L", r.profile.depth()},
          {"D", r.profile.shells},
          {"log_prob", r.log_prob},
          {"method", procgeo::to_string(r.method)},
          {"depth_range", {r.depth_swept.min, r.depth_swept.max}}};
}

json fit_json(const procgeo::DimensionFit& f) {
  return {{"d", f.d},
          {"log_amplitude", f.log_amplitude},
          {"residual", f.residual},
          {"points_used", f.points_used}};
}

json results_json(const ExperimentReport& r) {
  json out = json::object();
  if (r.history) {
    json snaps = json::array();
    for (const auto& s : r.history->snapshots) {
      json row = {{"step", s.step}};
      row.update(summary_json(s.summary));
      snaps.push_back(std::move(row));
    }
    out["history"] = std::move(snaps);
    out["final"] = summary_json(r.history->snapshots.back().summary);
  }
  if (r.maximize) {
    const auto& m = *r.maximize;
    out["result"] = maximization_json(m.optimizer);
    out["oracle"] = m.oracle ? maximization_json(*m.oracle) : json(nullptr);
    out["oracle_gap"] = optional_number(m.oracle_gap);
    out["oracle_agrees"] = m.oracle_gap ? json(*m.oracle_gap <= kOracleTolerance) : json(nullptr);
    out["fit"] = m.fit ? fit_json(*m.fit) : json(nullptr);
  }
  if (r.fit) {
    json f = {{"L", r.fit->depth}};
    f.update(fit_json(r.fit->fit));
    out["fit"] = std::move(f);
  }
  if (r.config.mode == Mode::Sweep) {
    json curve = json::array();
    for (const auto& pt : r.curve) {
      curve.push_back({{"p", pt.p},
                       {"log10_p", std::log10(pt.p)},
                       {"d", pt.d},
                       {"L", pt.depth},
                       {"log_prob", pt.log_prob},
                       {"D", pt.profile.shells}});
    }
    out["curve"] = std::move(curve);
  }
  if (r.emerge) {
    const auto& e = *r.emerge;
    out["initial"] = summary_json(e.initial);
    out["final"] = summary_json(e.final_summary);
    json census = json::array();
    for (const auto& c : e.census) {
      census.push_back({{"step", c.step},
                        {"links", c.links},
                        {"gebits", c.sizes.size()},
                        {"non_isolated", c.non_isolated},
                        {"sizes", c.sizes},
                        {"ids", c.ids},
                        {"largest_d", optional_number(c.largest_d)}});
    }
    out["census"] = std::move(census);
    json lives = json::array();
    for (const auto& l : e.lifetimes) {
      lives.push_back({{"id", l.id},
                       {"birth_step", l.birth_step},
                       {"last_step", l.last_step},
                       {"sightings", l.sightings},
                       {"max_size", l.max_size},
                       {"alive_at_end", l.alive_at_end}});
    }
    out["lifetimes"] = std::move(lives);
    json hist = json::array();
    for (const auto& [size, count] : e.sizes.histogram) hist.push_back({size, count});
    out["size_distribution"] = {{"histogram", std::move(hist)},
                                {"power_law_exponent", optional_number(e.sizes.power_law_exponent)}};
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
  written.push_back(path);
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? procgeo::format_double(*v) : std::string();
}

void emit_csv(const ExperimentReport& r, const std::filesystem::path& dir,
              std::vector<std::filesystem::path>& written) {
  using procgeo::format_double;
  std::ostringstream out;
  switch (r.config.mode) {
    case Mode::Iterate: {
      out << "step,frobenius,max_abs,sigma_max,sigma_min,links\n";
      for (const auto& s : r.history->snapshots) {
        out << s.step << ',' << format_double(s.summary.frobenius) << ','
            << format_double(s.summary.max_abs) << ',' << format_double(s.summary.sigma_max) << ','
            << format_double(s.summary.sigma_min) << ',' << s.summary.links << '\n';
      }
      write_file(dir / "history.csv", out.str(), written);
      std::ostringstream matrix;
      procgeo::write_matrix_csv(matrix, r.history->final_matrix);
      write_file(dir / "matrix.csv", matrix.str(), written);
      break;
    }
    case Mode::Maximize: {
      const auto& m = *r.maximize;
      out << "source,N,p,L,log_prob,method\n";
      const auto row = [&out](const char* source, const procgeo::MaximizationResult& res) {
        out << source << ',' << res.total_n << ',' << format_double(res.link_prob) << ','
            << res.profile.depth() << ',' << format_double(res.log_prob) << ','
            << procgeo::to_string(res.method) << '\n';
      };
      row("optimizer", m.optimizer);
      if (m.oracle) row("oracle", *m.oracle);
      write_file(dir / "result.csv", out.str(), written);
      std::ostringstream profile;
      procgeo::write_profile_csv(profile, m.optimizer.profile);
      write_file(dir / "profile.csv", profile.str(), written);
      if (m.oracle) {
        std::ostringstream oracle;
        procgeo::write_profile_csv(oracle, m.oracle->profile);
        write_file(dir / "oracle_profile.csv", oracle.str(), written);
      }
      break;
    }
    case Mode::Fit: {
      const auto& f = r.fit->fit;
      out << "L,d,log_amplitude,residual,points_used\n"
          << r.fit->depth << ',' << format_double(f.d) << ',' << format_double(f.log_amplitude)
          << ',' << format_double(f.residual) << ',' << f.points_used << '\n';
      write_file(dir / "fit.csv", out.str(), written);
      break;
    }
    case Mode::Sweep: {
      procgeo::write_curve_csv(out, r.curve);
      write_file(dir / "curve.csv", out.str(), written);
      break;
    }
    case Mode::Emerge: {
      const auto& e = *r.emerge;
      out << "step,links,gebits,non_isolated,largest_size,largest_d\n";
      for (const auto& c : e.census) {
        out << c.step << ',' << c.links << ',' << c.sizes.size() << ',' << c.non_isolated << ','
            << (c.sizes.empty() ? 0 : c.sizes.front()) << ',' << csv_optional(c.largest_d) << '\n';
      }
      write_file(dir / "census.csv", out.str(), written);
      std::ostringstream sizes;
      sizes << "size,count\n";
      for (const auto& [size, count] : e.sizes.histogram) sizes << size << ',' << count << '\n';
      write_file(dir / "sizes.csv", sizes.str(), written);
      std::ostringstream lives;
      lives << "id,birth_step,last_step,sightings,max_size,alive_at_end\n";
      for (const auto& l : e.lifetimes) {
        lives << l.id << ',' << l.birth_step << ',' << l.last_step << ',' << l.sightings << ','
              << l.max_size << ',' << (l.alive_at_end ? 1 : 0) << '\n';
      }
      write_file(dir / "lifetimes.csv", lives.str(), written);
      break;
    }
  }
}

}  // namespace

std::string report_json(const ExperimentReport& report) {
  json doc = {{"tool", "expedition"},
              {"version", report.tool_version},
              {"mode", to_string(report.config.mode)},
              {"seed", report.config.seed},
              {"config", config_json(report.config)},
              {"results", results_json(report)}};
  return doc.dump(2) + "\n";
}

ExperimentConfig config_from_report_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw procgeo::ValidationError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.contains("config") || !doc["config"].is_object()) {
    throw procgeo::ValidationError("report has no config block");
  }
  std::string lines;
  for (const auto& [key, value] : doc["config"].items()) {
    std::string rendered;
    if (value.is_string()) {
      rendered = value.get<std::string>();
    } else if (value.is_number_float()) {
      rendered = procgeo::format_double(value.get<double>());
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) rendered += ", ";
        rendered += procgeo::format_double(value[i].get<double>());
      }
    } else {
      rendered = value.dump();
    }
    lines += key + " = " + rendered + "\n";
  }
  return parse_config(lines, "<report config>");
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, Format format,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  write_file(dir / "config.txt", emit_config(report.config), written);
  if (format == Format::Json) {
    write_file(dir / "report.json", report_json(report), written);
  } else {
    emit_csv(report, dir, written);
  }
  return written;
}

}  // namespace expedition
