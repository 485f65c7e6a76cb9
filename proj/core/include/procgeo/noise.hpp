#pragma once

#include <random>

#include "procgeo/relational.hpp"

namespace procgeo {

/// Two-component noise: Gaussian background plus rare large links.
struct NoiseSpec {
  double background_sigma = 0.0;
  /// Per unordered pair, per draw.
  double rare_prob = 0.0;
  double rare_lo = 1.0;
  double rare_hi = 1.0;

  /// Throws ValidationError naming the offending field.
  void validate() const;
  bool is_silent() const noexcept { return background_sigma == 0.0 && rare_prob == 0.0; }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Antisymmetric realization of the noise for one iteration.
using NoiseMatrix = RelationalMatrix;

using Rng = std::mt19937_64;

/// Pairs are visited row-major over i < j, so the generator advances the same
/// way for every call with identical (n, spec, state).
NoiseMatrix draw_noise(Eigen::Index n, const NoiseSpec& spec, Rng& rng);

}  // namespace procgeo
