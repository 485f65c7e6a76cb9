#include "procgeo/noise.hpp"

#include <cmath>

#include "procgeo/error.hpp"

namespace procgeo {

void NoiseSpec::validate() const {
  if (!(background_sigma >= 0.0) || !std::isfinite(background_sigma)) {
    throw ValidationError("background_sigma must be a finite value >= 0");
  }
  if (!(rare_prob >= 0.0 && rare_prob <= 1.0)) {
    throw ValidationError("rare_prob must lie in [0, 1]");
  }
  if (rare_prob > 0.0 && !(rare_lo > 0.0 && rare_hi >= rare_lo && std::isfinite(rare_hi))) {
    throw ValidationError("rare link range needs 0 < rare_lo <= rare_hi");
  }
}

NoiseMatrix draw_noise(Eigen::Index n, const NoiseSpec& spec, Rng& rng) {
  spec.validate();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  if (spec.is_silent()) return antisymmetric_part(w);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> background(0.0, spec.background_sigma > 0.0 ? spec.background_sigma : 1.0);
  const double span = spec.rare_hi - spec.rare_lo;

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = 0.0;
      if (spec.rare_prob > 0.0 && unit(rng) < spec.rare_prob) {
        const double magnitude = spec.rare_lo + span * unit(rng);
        v = unit(rng) < 0.5 ? -magnitude : magnitude;
      } else if (spec.background_sigma > 0.0) {
        v = background(rng);
      }
      w(i, j) = v;
      w(j, i) = -v;
    }
  }
  return antisymmetric_part(w);
}

}  // namespace procgeo
