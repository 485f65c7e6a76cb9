#include "procgeo/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "procgeo/error.hpp"

namespace procgeo {

DimensionFit fit_dimension(std::span<const double> shells, TrimPolicy trim) {
  const std::size_t depth = shells.size();
  if (depth < 3) throw ValidationError("dimension fit needs depth L >= 3");
  // k = L is dropped: sin(pi) = 0.
  std::size_t first = 1;
  std::size_t last = depth - 1;
  while (first <= last && shells[first - 1] < trim.floor) ++first;
  while (last >= first && shells[last - 1] < trim.floor) --last;
  if (last < first + 1) throw ValidationError("fewer than 2 usable shells after trimming");

  const double period = static_cast<double>(depth);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = first; k <= last; ++k) {
    const double dk = shells[k - 1];
    if (!(dk > 0.0) || !std::isfinite(dk)) {
      throw ValidationError("shell D_" + std::to_string(k) + " must be positive and finite");
    }
    x.push_back(std::log(std::sin(std::numbers::pi * static_cast<double>(k) / period)));
    y.push_back(std::log(dk));
  }

  const double count = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
  }
  if (!(sxx > 1e-12 * count)) {
    throw ValidationError("usable shells sit at symmetric positions only; slope is undetermined");
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    sq += r * r;
  }
  return {slope + 1.0, intercept, std::sqrt(sq / count), x.size()};
}

DimensionFit fit_dimension(const ShellProfile& profile, TrimPolicy trim) {
  profile.validate();
  const auto reals = profile.as_reals();
  return fit_dimension(std::span<const double>(reals), trim);
}

DimensionCurvePoint dimension_of_p(std::size_t total_n, double p, DepthRange range, TrimPolicy trim,
                                   const MaximizeOptions& options) {
  auto best = maximize_profile(LikelihoodQuery{total_n, p}, range, options);
  const DimensionFit fit = fit_dimension(best.profile, trim);
  return {p, fit.d, best.profile.depth(), best.log_prob, std::move(best.profile)};
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

EmpiricalDimension empirical_dimension(const Gebit& gebit, const RootPolicy& roots,
                                       TrimPolicy trim) {
  constexpr std::size_t kMinNodes = 10;
  constexpr std::size_t kMinDepth = 3;
  if (gebit.size() < kMinNodes) {
    throw ValidationError("gebit too small: " + std::to_string(gebit.size()) + " nodes, need " +
                          std::to_string(kMinNodes));
  }

  std::vector<NodeId> chosen;
  if (roots.fixed_root) {
    chosen.push_back(*roots.fixed_root);
  } else {
    const std::size_t m = std::min(gebit.size(), std::max<std::size_t>(roots.sample_roots, 1));
    for (std::size_t i = 0; i < m; ++i) chosen.push_back(gebit.nodes[i * gebit.size() / m]);
  }

  EmpiricalDimension out;
  std::vector<DimensionFit> fits;
  for (NodeId root : chosen) {
    const ShellProfile profile = shell_profile(gebit, root);
    if (profile.depth() < kMinDepth) continue;
    fits.push_back(fit_dimension(profile, trim));
    out.per_root_d.push_back(fits.back().d);
  }
  if (fits.empty()) throw ValidationError("gebit too shallow: BFS depth below 3 from every root");

  std::vector<double> amp;
  std::vector<double> res;
  std::size_t points = fits.front().points_used;
  for (const auto& f : fits) {
    amp.push_back(f.log_amplitude);
    res.push_back(f.residual);
    points = std::min(points, f.points_used);
  }
  out.fit = {median(out.per_root_d), median(amp), median(res), points};
  return out;
}

}  // namespace procgeo
