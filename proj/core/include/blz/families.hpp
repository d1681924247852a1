#pragma once

#include <cstdint>
#include <vector>

#include "blz/functionals.hpp"
#include "blz/grid.hpp"

namespace blz {

Distribution make_maxwellian(const VelocityGrid& grid, double rho = 1.0,
                             const Vec3& u = {0.0, 0.0, 0.0}, double T = 1.0);

/// Normalized indicator of the ball |v| <= radius (unit mass).
Distribution make_ball_indicator(const VelocityGrid& grid, double radius = 1.0);

/// Isotropic BKW state with shape parameter K in [3/5, 1]:
/// f = rho (2 pi K)^{-3/2} e^{-|v|^2/(2K)} [ (5K-3)/(2K) + (1-K)/(2K^2) |v|^2 ],
/// the exact self-similar solution family for Maxwellian molecules (gamma = 0).
Distribution make_bkw(const VelocityGrid& grid, double K, double rho = 1.0);

enum class FamilyKind {
  GaussianMixture,
  BumpSum,
  IndicatorSmoothed,
  RandomBandLimited,
};

FamilyKind parse_family_kind(const std::string& name);

/// Seeded generator of test fields. Gaussian mixtures, bump sums, and
/// smoothed indicators are nonnegative with unit-order mass; band-limited
/// fields are signed and mean-zero-ish.
std::vector<Distribution> generate_family(const VelocityGrid& grid, FamilyKind kind,
                                          int count, std::uint64_t seed,
                                          double band_xi_max = 0.0);

/// Nonnegative fields rescaled and rejection-filtered into U(D0, E0).
std::vector<Distribution> generate_in_class(const VelocityGrid& grid, FamilyKind kind,
                                            int count, std::uint64_t seed,
                                            const UniformClassParams& params);

}  // namespace blz
