#include "procgeo/likelihood.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <future>
#include <numbers>
#include <numeric>
#include <string>
#include <limits>
#include <thread>

#include <Eigen/Cholesky>

#include "procgeo/error.hpp"

namespace procgeo {
namespace {

// Euclidean projection of v onto {y >= 0, sum y = total}.
void project_simplex(std::vector<double>& v, double total) {
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - total) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  for (double& x : v) x = std::max(x - shift, 0.0);
}

std::vector<double> shift_up(const std::vector<double>& y) {
  std::vector<double> d(y.size());
  std::transform(y.begin(), y.end(), d.begin(), [](double v) { return v + 1.0; });
  return d;
}

// Incremental evaluation of single-node transfers between shells of an
// integer profile.
class TransferEvaluator {
 public:
  TransferEvaluator(const std::vector<double>& shells, double p)
      : s_(shells), log_p_(std::log(p)), log_q_(std::log1p(-p)) {
    const std::size_t depth = s_.size();
    prefix_.assign(depth + 1, 0.0);
    for (std::size_t k = 0; k < depth; ++k) prefix_[k + 1] = prefix_[k] + s_[k];
    grad_q_.assign(depth, 0.0);
    for (std::size_t k = 0; k < depth; ++k) {
      const double before = k >= 2 ? prefix_[k - 1] : 0.0;  // sum_{u <= k-2}
      const double after = prefix_[depth] - prefix_[std::min(k + 2, depth)];
      grad_q_[k] = (k >= 1 ? 1.0 : 0.0) + before + after;
    }
  }

  // Change in log-likelihood from moving one node from shell `from` to `to`.
  double delta(std::size_t from, std::size_t to) const {
    const double skip = (from > to ? from - to : to - from) >= 2 ? 1.0 : 0.0;
    double change = log_q_ * (grad_q_[to] - grad_q_[from] - skip);
    if (from == 0) change -= log_p_;
    if (to == 0) change += log_p_;
    change += std::log(s_[from]) - std::log(s_[to] + 1.0);

    std::size_t touched[4];
    std::size_t count = 0;
    auto touch = [&](std::size_t t) {
      if (t + 1 >= s_.size()) return;
      for (std::size_t i = 0; i < count; ++i)
        if (touched[i] == t) return;
      touched[count++] = t;
    };
    if (from >= 1) touch(from - 1);
    touch(from);
    if (to >= 1) touch(to - 1);
    touch(to);

    auto at = [&](std::size_t k, bool moved) {
      if (!moved) return s_[k];
      return s_[k] + (k == to ? 1.0 : 0.0) - (k == from ? 1.0 : 0.0);
    };
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t t = touched[i];
      const double before = at(t + 1, false) * std::log(-std::expm1(at(t, false) * log_q_));
      const double after = at(t + 1, true) * std::log(-std::expm1(at(t, true) * log_q_));
      change += after - before;
    }
    return change;
  }

 private:
  const std::vector<double>& s_;
  double log_p_;
  double log_q_;
  std::vector<double> prefix_;
  std::vector<double> grad_q_;
};

struct DepthOutcome {
  ShellProfile profile;
  double log_prob = 0.0;
};

DepthOutcome solve_depth(const LikelihoodQuery& query, std::size_t depth,
                         const MaximizeOptions& options) {
  const ContinuousProfile relaxed = relax_profile(query, depth, options);
  ShellProfile best = refine_profile(round_profile(relaxed, query.total_n), query.link_prob);
  const double value = log_likelihood(best, query.link_prob);
  return {std::move(best), value};
}

}  // namespace

DepthRange DepthRange::defaults_for(std::size_t total_n) {
  const std::size_t top = total_n > 1 ? total_n - 1 : 1;
  return {std::min<std::size_t>(2, top), std::min<std::size_t>(top, 120)};
}

ContinuousProfile relax_profile(const LikelihoodQuery& query, std::size_t depth,
                                const MaximizeOptions& options) {
  query.validate();
  const std::size_t n = query.total_n;
  if (depth < 1 || depth > n - 1) {
    throw ValidationError("infeasible depth L = " + std::to_string(depth) + " for N = " +
                          std::to_string(n));
  }
  const double p = query.link_prob;
  // Work in excess coordinates y = d - 1 >= 0 with sum y = budget.
  const double budget = static_cast<double>(n - 1 - depth);

  std::vector<double> y(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k + 1) /
                              static_cast<double>(depth + 1));
    y[k] = s * s;
  }
  const double mass = std::accumulate(y.begin(), y.end(), 0.0);
  for (double& v : y) v *= budget / mass;
  if (budget == 0.0 || depth == 1) {
    if (depth == 1) y[0] = budget;
    return {shift_up(y)};
  }

  auto value_at = [&](const std::vector<double>& excess) {
    const auto d = shift_up(excess);
    return log_likelihood(std::span<const double>(d), p);
  };

  // Projected Newton ascent. Shells at the lower bound stay out of the Newton
  // system unless their gradient beats the simplex multiplier; trial points
  // follow the projection arc P(y + t * direction). A projected gradient step
  // takes over whenever the Newton arc fails to ascend.
  constexpr double kArmijo = 1e-4;
  double f = value_at(y);
  std::vector<double> g;
  std::vector<double> trial(depth);
  double f_trial = f;

  auto arc_search = [&](const std::vector<double>& direction) {
    for (double t = 1.0; t > 1e-14; t *= 0.5) {
      for (std::size_t k = 0; k < depth; ++k) trial[k] = y[k] + t * direction[k];
      project_simplex(trial, budget);
      double predicted = 0.0;
      for (std::size_t k = 0; k < depth; ++k) predicted += g[k] * (trial[k] - y[k]);
      if (!(predicted > 0.0)) continue;
      f_trial = value_at(trial);
      if (f_trial >= f + kArmijo * predicted) return true;
    }
    return false;
  };

  for (std::size_t iter = 0; iter < options.max_ascent_iterations; ++iter) {
    const auto d = shift_up(y);
    g = gradient_log_likelihood(std::span<const double>(d), p);
    const auto h = hessian_log_likelihood(std::span<const double>(d), p);

    std::vector<char> free(depth);
    for (std::size_t k = 0; k < depth; ++k) free[k] = y[k] > 0.0;
    std::vector<double> direction(depth, 0.0);
    double multiplier = 0.0;
    for (int pass = 0; pass < 4; ++pass) {
      std::vector<std::size_t> index;
      for (std::size_t k = 0; k < depth; ++k)
        if (free[k]) index.push_back(k);
      const auto m = static_cast<Eigen::Index>(index.size());
      Eigen::MatrixXd curvature(m, m);
      Eigen::VectorXd grad(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        grad(a) = g[index[a]];
        for (Eigen::Index b = 0; b < m; ++b) curvature(a, b) = -h[index[a] * depth + index[b]];
      }
      // Levenberg shift until the negated Hessian is positive definite.
      Eigen::LLT<Eigen::MatrixXd> llt(curvature);
      double shift = 1e-10 * std::max(1.0, curvature.diagonal().cwiseAbs().maxCoeff());
      while (llt.info() != Eigen::Success) {
        llt.compute(curvature + shift * Eigen::MatrixXd::Identity(m, m));
        shift *= 10.0;
      }
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
      const Eigen::VectorXd solve_g = llt.solve(grad);
      const Eigen::VectorXd solve_1 = llt.solve(ones);
      multiplier = ones.dot(solve_g) / ones.dot(solve_1);
      const Eigen::VectorXd step = solve_g - multiplier * solve_1;
      std::fill(direction.begin(), direction.end(), 0.0);
      for (Eigen::Index a = 0; a < m; ++a) direction[index[a]] = step(a);

      bool released = false;
      for (std::size_t k = 0; k < depth; ++k) {
        if (!free[k] && g[k] > multiplier) {
          free[k] = 1;
          released = true;
        }
      }
      if (!released) break;
    }

    bool moved = arc_search(direction);
    if (!moved) {
      // Scaled projected gradient fallback.
      double scale = 0.0;
      for (double v : g) scale = std::max(scale, std::abs(v - multiplier));
      if (scale == 0.0) break;
      for (std::size_t k = 0; k < depth; ++k) direction[k] = (g[k] - multiplier) / scale;
      moved = arc_search(direction);
    }
    if (!moved) break;

    double largest = 0.0;
    for (std::size_t k = 0; k < depth; ++k) largest = std::max(largest, std::abs(trial[k] - y[k]));
    y.swap(trial);
    f = f_trial;
    if (largest < options.ascent_tolerance) break;
  }
  return {shift_up(y)};
}

ShellProfile round_profile(const ContinuousProfile& relaxed, std::size_t total_n) {
  const std::size_t depth = relaxed.depth();
  if (depth == 0 || depth > total_n - 1) throw ValidationError("cannot round an infeasible profile");
  const std::size_t budget = total_n - 1 - depth;

  std::vector<std::size_t> base(depth);
  std::vector<std::pair<double, std::size_t>> remainders(depth);
  std::size_t assigned = 0;
  const double raw_total = std::accumulate(relaxed.shells.begin(), relaxed.shells.end(), 0.0) -
                           static_cast<double>(depth);
  const double scale = raw_total > 0.0 ? static_cast<double>(budget) / raw_total : 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    const double excess = std::max(relaxed.shells[k] - 1.0, 0.0) * scale;
    base[k] = static_cast<std::size_t>(std::floor(excess));
    assigned += base[k];
    remainders[k] = {excess - std::floor(excess), k};
  }
  // Float drift can push the floors past the budget; take back from the largest.
  while (assigned > budget) {
    const auto it = std::max_element(base.begin(), base.end());
    --*it;
    --assigned;
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < budget; r = (r + 1) % depth) {
    ++base[remainders[r].second];
    ++assigned;
  }

  std::vector<std::size_t> shells(depth);
  for (std::size_t k = 0; k < depth; ++k) shells[k] = base[k] + 1;
  return ShellProfile::from_shells(std::move(shells));
}

ShellProfile refine_profile(ShellProfile start, double p) {
  start.validate();
  std::vector<double> s = start.as_reals();
  double current = log_likelihood(std::span<const double>(s), p);
  const std::size_t depth = s.size();

  for (;;) {
    const TransferEvaluator eval(s, p);
    double best_gain = 0.0;
    std::size_t best_from = 0;
    std::size_t best_to = 0;
    for (std::size_t from = 0; from < depth; ++from) {
      if (s[from] < 2.0) continue;
      for (std::size_t to = 0; to < depth; ++to) {
        if (to == from) continue;
        const double gain = eval.delta(from, to);
        if (gain > best_gain) {
          best_gain = gain;
          best_from = from;
          best_to = to;
        }
      }
    }
    if (best_gain <= 0.0) break;
    s[best_from] -= 1.0;
    s[best_to] += 1.0;
    const double moved = log_likelihood(std::span<const double>(s), p);
    if (!(moved > current)) {
      s[best_from] += 1.0;
      s[best_to] -= 1.0;
      break;
    }
    current = moved;
  }

  for (std::size_t k = 0; k < depth; ++k) start.shells[k] = static_cast<std::size_t>(s[k]);
  return start;
}

MaximizationResult maximize_profile(const LikelihoodQuery& query, DepthRange range,
                                    const MaximizeOptions& options) {
  query.validate();
  if (range.min < 1 || range.min > range.max) throw ValidationError("empty depth range");
  if (range.max > query.total_n - 1) {
    throw ValidationError("infeasible depth range: L_max = " + std::to_string(range.max) +
                          " exceeds N - 1 = " + std::to_string(query.total_n - 1));
  }

  const std::size_t count = range.max - range.min + 1;
  std::vector<DepthOutcome> outcomes(count);
  if (options.parallel && count > 1) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < count; i += workers) {
          outcomes[i] = solve_depth(query, range.min + i, options);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < count; ++i) outcomes[i] = solve_depth(query, range.min + i, options);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (outcomes[i].log_prob > outcomes[best].log_prob) best = i;
  }
  MaximizationResult result;
  result.total_n = query.total_n;
  result.link_prob = query.link_prob;
  result.profile = std::move(outcomes[best].profile);
  result.log_prob = outcomes[best].log_prob;
  result.depth_swept = range;
  result.method = MaximizationMethod::RelaxationRefinement;
  return result;
}

MaximizationResult maximize_profile(const LikelihoodQuery& query) {
  query.validate();
  return maximize_profile(query, DepthRange::defaults_for(query.total_n));
}

MaximizationResult brute_force_profile(const LikelihoodQuery& query, std::size_t cap) {
  query.validate();
  return brute_force_profile(query, DepthRange{1, query.total_n - 1}, cap);
}

MaximizationResult brute_force_profile(const LikelihoodQuery& query, DepthRange range,
                                       std::size_t cap) {
  query.validate();
  if (query.total_n > cap) {
    throw ValidationError("oracle cap exceeded: N = " + std::to_string(query.total_n) +
                          " > cap " + std::to_string(cap));
  }
  const std::size_t parts_total = query.total_n - 1;
  if (range.min < 1 || range.min > range.max || range.max > parts_total) {
    throw ValidationError("depth range must satisfy 1 <= min <= max <= N - 1");
  }
  const std::size_t gaps = parts_total - 1;

  std::vector<double> best_shells;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> shells;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gaps); ++mask) {
    const auto depth = static_cast<std::size_t>(std::popcount(mask)) + 1;
    if (depth < range.min || depth > range.max) continue;
    // Bit g set means a cut after unit g.
    shells.clear();
    double run = 1.0;
    for (std::size_t g = 0; g < gaps; ++g) {
      if (mask >> g & 1u) {
        shells.push_back(run);
        run = 1.0;
      } else {
        run += 1.0;
      }
    }
    shells.push_back(run);
    const double value = log_likelihood(std::span<const double>(shells), query.link_prob);
    if (value > best_value || (value == best_value && shells.size() < best_shells.size())) {
      best_value = value;
      best_shells = shells;
    }
  }

  MaximizationResult result;
  result.total_n = query.total_n;
  result.link_prob = query.link_prob;
  std::vector<std::size_t> integral(best_shells.begin(), best_shells.end());
  result.profile = ShellProfile::from_shells(std::move(integral));
  result.log_prob = best_value;
  result.depth_swept = range;
  result.method = MaximizationMethod::Enumeration;
  return result;
}

}  // namespace procgeo
