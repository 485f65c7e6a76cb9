#include "procgeo/iterator.hpp"

#include <string>

#include "procgeo/error.hpp"

namespace procgeo {
namespace {

// Independent noise stream for a given run seed.
Rng noise_stream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x6e6f6973u, 0x65000001u};
  return Rng(seq);
}

}  // namespace

void IteratorConfig::validate() const {
  if (nodes < 2) throw ValidationError("nodes: degenerate size, need at least 2");
  if (nodes % 2 != 0) throw ValidationError("nodes: odd dimension " + std::to_string(nodes));
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(start_scale > 0.0)) throw ValidationError("start_scale must be > 0");
  if (!(sigma_floor_ratio > 0.0 && sigma_floor_ratio < 1.0)) {
    throw ValidationError("sigma_floor_ratio must lie in (0, 1)");
  }
}

RelationalMatrix iterate_step(const RelationalMatrix& b, double alpha, const NoiseMatrix& w,
                              double sigma_floor_ratio) {
  if (b.size() != w.size()) throw ValidationError("noise and relational matrix sizes differ");
  const RelationalMatrix inv = safe_inverse(b, sigma_floor_ratio);
  return antisymmetric_part(b.dense() - alpha * (b.dense() + inv.dense()) + w.dense());
}

RelationalMatrix iterate_step(const RelationalMatrix& b, double alpha, double sigma_floor_ratio) {
  const RelationalMatrix inv = safe_inverse(b, sigma_floor_ratio);
  return antisymmetric_part(b.dense() - alpha * (b.dense() + inv.dense()));
}

MatrixSummary summarize(const RelationalMatrix& b, double link_threshold) {
  MatrixSummary s;
  s.frobenius = b.dense().norm();
  s.max_abs = b.max_abs();
  const auto sv = singular_values(b);
  s.sigma_max = sv.front();
  s.sigma_min = sv.back();
  const Eigen::Index n = b.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(b(i, j)) >= link_threshold) ++s.links;
    }
  }
  return s;
}

bool RecordPolicy::records(std::size_t step, std::size_t total_steps) const noexcept {
  if (step == 0 || step == total_steps) return true;
  return every != 0 && step % every == 0;
}

IterationHistory run_iterator(const IteratorConfig& config, const NoiseSpec& noise,
                              const RecordPolicy& policy, const StepObserver& observer) {
  config.validate();
  noise.validate();

  RelationalMatrix b = init_matrix(config.nodes, config.start_scale, config.seed);
  Rng rng = noise_stream(config.seed);
  IterationHistory history;

  auto record = [&](std::size_t step) {
    if (!policy.records(step, config.steps)) return;
    Snapshot snap{step, summarize(b, policy.link_threshold), std::nullopt};
    if (policy.keep_matrices) snap.matrix = b;
    history.snapshots.push_back(std::move(snap));
    if (observer) observer(step, b);
  };

  record(0);
  for (std::size_t step = 1; step <= config.steps; ++step) {
    const double last_max = b.max_abs();
    if (noise.is_silent()) {
      b = iterate_step(b, config.alpha, config.sigma_floor_ratio);
    } else {
      b = iterate_step(b, config.alpha, draw_noise(config.nodes, noise, rng),
                       config.sigma_floor_ratio);
    }
    if (!b.all_finite()) throw BlowUpError(step, last_max);
    record(step);
  }
  history.final_matrix = std::move(b);
  return history;
}

}  // namespace procgeo
