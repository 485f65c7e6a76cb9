#include "expedition/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <tuple>

#include "procgeo/csv.hpp"
#include "procgeo/error.hpp"
#include "procgeo/graph.hpp"

namespace expedition {

using procgeo::NodeId;
using procgeo::NumericalError;
using procgeo::ValidationError;

namespace {

// Runs `f`, prefixing any module error with the pipeline stage it came from.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(name) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(name) + ": " + e.what());
  }
}

MaximizeReport run_maximize(const ExperimentConfig& c, const RunOptions& opt) {
  procgeo::MaximizeOptions mo;
  mo.parallel = opt.parallel;
  MaximizeReport out;
  out.optimizer = stage("maximize_profile",
                        [&] { return procgeo::maximize_profile(c.query(), c.depth_range(), mo); });
  if (c.total_n <= c.oracle_cap) {
    out.oracle = stage("brute_force_profile", [&] {
      return procgeo::brute_force_profile(c.query(), c.depth_range(), c.oracle_cap);
    });
    out.oracle_gap = std::abs(out.optimizer.log_prob - out.oracle->log_prob);
  }
  if (out.optimizer.profile.depth() >= 3) {
    try {
      out.fit = procgeo::fit_dimension(out.optimizer.profile, procgeo::TrimPolicy{c.trim_floor});
    } catch (const ValidationError&) {
      // Too few shells above the trim floor; the report simply omits the fit.
    }
  }
  return out;
}

FitReport run_fit(const ExperimentConfig& c) {
  std::ifstream in(c.profile, std::ios::binary);
  if (!in) throw ValidationError("fit: cannot open profile file " + c.profile);
  const auto shells = stage("read_profile_csv", [&] { return procgeo::read_profile_csv(in); });
  FitReport out;
  out.depth = shells.size();
  out.fit = stage("fit_dimension", [&] {
    return procgeo::fit_dimension(std::span<const double>(shells), procgeo::TrimPolicy{c.trim_floor});
  });
  return out;
}

std::vector<procgeo::DimensionCurvePoint> run_sweep(const ExperimentConfig& c, const RunOptions& opt) {
  const auto point = [&c](double p) {
    return stage("dimension_of_p", [&] {
      return procgeo::dimension_of_p(c.total_n, p, c.depth_range(), procgeo::TrimPolicy{c.trim_floor});
    });
  };
  std::vector<procgeo::DimensionCurvePoint> curve;
  if (!opt.parallel) {
    for (double p : c.p_grid) curve.push_back(point(p));
    return curve;
  }
  std::vector<std::future<procgeo::DimensionCurvePoint>> jobs;
  for (double p : c.p_grid) jobs.push_back(std::async(std::launch::async, point, p));
  // Collected in grid order, so output does not depend on scheduling.
  for (auto& j : jobs) curve.push_back(j.get());
  return curve;
}

class CensusTaker {
 public:
  explicit CensusTaker(const ExperimentConfig& c) : config_(c) {}

  void observe(std::size_t step, const procgeo::RelationalMatrix& b) {
    const auto graph = stage("extract_links", [&] { return procgeo::extract_links(b, config_.threshold_spec()); });
    auto components = stage("connected_components", [&] { return procgeo::connected_components(graph); });

    GebitCensus census;
    census.step = step;
    census.links = graph.edge_count();
    std::vector<std::vector<NodeId>> node_sets;
    for (const auto& g : components) {
      if (g.size() < 2) break;  // sorted by size, singletons come last
      census.sizes.push_back(g.size());
      census.non_isolated += g.size();
      node_sets.push_back(g.nodes);
    }
    if (!node_sets.empty()) {
      try {
        const auto est = procgeo::empirical_dimension(
            components.front(), procgeo::RootPolicy{std::nullopt, config_.sample_roots},
            procgeo::TrimPolicy{config_.trim_floor});
        census.largest_d = est.fit.d;
      } catch (const ValidationError&) {
        // Too small or too shallow to measure.
      }
    }

    const auto links = match_gebits(previous_, node_sets, config_.jaccard, b.size());
    for (std::size_t i = 0; i < node_sets.size(); ++i) {
      std::size_t id;
      if (links[i]) {
        id = previous_ids_[*links[i]];
      } else {
        id = lifetimes_.size();
        lifetimes_.push_back({id, step, step, 0, 0, false});
      }
      auto& life = lifetimes_[id];
      life.last_step = step;
      ++life.sightings;
      life.max_size = std::max(life.max_size, node_sets[i].size());
      census.ids.push_back(id);
      ++histogram_[node_sets[i].size()];
    }
    previous_ = std::move(node_sets);
    previous_ids_ = census.ids;
    census_.push_back(std::move(census));
  }

  void finish(EmergeReport& out) {
    for (std::size_t id : previous_ids_) lifetimes_[id].alive_at_end = true;
    out.census = std::move(census_);
    out.lifetimes = std::move(lifetimes_);
    out.sizes.histogram = std::move(histogram_);
    out.sizes.power_law_exponent = power_law_exponent(out.sizes.histogram);
  }

 private:
  const ExperimentConfig& config_;
  std::vector<std::vector<NodeId>> previous_;
  std::vector<std::size_t> previous_ids_;
  std::vector<GebitCensus> census_;
  std::vector<GebitLifetime> lifetimes_;
  std::map<std::size_t, std::size_t> histogram_;
};

procgeo::MatrixSummary summary_for(const ExperimentConfig& c, const procgeo::RelationalMatrix& b) {
  if (c.threshold_kind == ThresholdKind::Absolute) return procgeo::summarize(b, c.threshold);
  // Quantile extraction: count the links that extraction would keep.
  auto s = procgeo::summarize(b, INFINITY);
  s.links = procgeo::extract_links(b, c.threshold_spec()).edge_count();
  return s;
}

EmergeReport run_emerge(const ExperimentConfig& c) {
  EmergeReport out;
  CensusTaker census(c);
  std::optional<procgeo::RelationalMatrix> initial;
  procgeo::RecordPolicy policy;
  policy.every = c.record_every;
  policy.link_threshold = c.threshold;
  const auto history = stage("run_iterator", [&] {
    return procgeo::run_iterator(c.iterator(), c.noise(), policy,
                                 [&](std::size_t step, const procgeo::RelationalMatrix& b) {
                                   if (step == 0) {
                                     initial = b;
                                   } else {
                                     census.observe(step, b);
                                   }
                                 });
  });
  out.initial = summary_for(c, *initial);
  out.final_summary = summary_for(c, history.final_matrix);
  census.finish(out);
  return out;
}

}  // namespace

std::vector<std::optional<std::size_t>> match_gebits(const std::vector<std::vector<NodeId>>& previous,
                                                     const std::vector<std::vector<NodeId>>& current,
                                                     double min_jaccard, std::size_t node_count) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(node_count, kNone);
  for (std::size_t g = 0; g < previous.size(); ++g) {
    for (NodeId v : previous[g]) owner.at(v) = g;
  }

  struct Candidate {
    double jaccard;
    std::size_t cur;
    std::size_t prev;
  };
  std::vector<Candidate> candidates;
  std::map<std::size_t, std::size_t> overlap;
  for (std::size_t c = 0; c < current.size(); ++c) {
    overlap.clear();
    for (NodeId v : current[c]) {
      if (owner.at(v) != kNone) ++overlap[owner[v]];
    }
    for (const auto& [g, inter] : overlap) {
      const double uni = static_cast<double>(previous[g].size() + current[c].size() - inter);
      const double j = static_cast<double>(inter) / uni;
      if (j >= min_jaccard) candidates.push_back({j, c, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.jaccard, a.cur, a.prev) < std::tie(a.jaccard, b.cur, b.prev);
  });

  std::vector<std::optional<std::size_t>> out(current.size());
  std::vector<bool> claimed(previous.size(), false);
  for (const auto& cand : candidates) {
    if (out[cand.cur] || claimed[cand.prev]) continue;
    out[cand.cur] = cand.prev;
    claimed[cand.prev] = true;
  }
  return out;
}

std::optional<double> power_law_exponent(const std::map<std::size_t, std::size_t>& histogram,
                                         std::size_t s_min) {
  double count = 0.0;
  double log_sum = 0.0;
  const double shifted = static_cast<double>(s_min) - 0.5;
  for (const auto& [size, n] : histogram) {
    if (size < s_min) continue;
    count += static_cast<double>(n);
    log_sum += static_cast<double>(n) * std::log(static_cast<double>(size) / shifted);
  }
  if (count < 2.0 || !(log_sum > 0.0)) return std::nullopt;
  return 1.0 + count / log_sum;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;
  report.tool_version = PROCGEO_VERSION;

  switch (config.mode) {
    case Mode::Iterate: {
      procgeo::RecordPolicy policy;
      policy.every = config.record_every;
      policy.link_threshold = config.threshold;
      report.history = stage("run_iterator",
                             [&] { return procgeo::run_iterator(config.iterator(), config.noise(), policy); });
      break;
    }
    case Mode::Maximize: report.maximize = run_maximize(config, options); break;
    case Mode::Fit: report.fit = run_fit(config); break;
    case Mode::Sweep: report.curve = run_sweep(config, options); break;
    case Mode::Emerge: report.emerge = run_emerge(config); break;
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace expedition
