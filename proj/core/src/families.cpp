#include "blz/families.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace blz {

namespace {

template <class Fn>
Distribution sample_radial_free(const VelocityGrid& grid, Fn&& fn) {
  Distribution f(grid);
  const int n = grid.n();
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) f.values[idx] = fn(grid.velocity(i, j, k));
  return f;
}

double bump(double t) {
  // C^inf bump on |t| < 1
  const double t2 = t * t;
  return t2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t2)) : 0.0;
}

}  // namespace

Distribution make_maxwellian(const VelocityGrid& grid, double rho, const Vec3& u,
                             double T) {
  if (!(rho >= 0.0) || !(T > 0.0))
    throw std::invalid_argument("make_maxwellian: need rho >= 0 and T > 0");
  const double pref = rho / std::pow(2.0 * M_PI * T, 1.5);
  auto f = sample_radial_free(grid, [&](const Vec3& v) {
    const Vec3 d = {v[0] - u[0], v[1] - u[1], v[2] - u[2]};
    return pref * std::exp(-0.5 * norm2(d) / T);
  });
  f.nonnegative = true;
  return f;
}

Distribution make_ball_indicator(const VelocityGrid& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_ball_indicator: radius > 0");
  auto f = sample_radial_free(grid, [&](const Vec3& v) {
    return norm2(v) <= radius * radius ? 1.0 : 0.0;
  });
  // Normalize against the lattice quadrature, not the continuum volume, so
  // the datum has unit mass at every resolution.
  const double mass = quadrature(f, WeightSpec::unit());
  if (!(mass > 0.0))
    throw std::invalid_argument("make_ball_indicator: no lattice points inside the ball");
  for (auto& x : f.values) x /= mass;
  f.nonnegative = true;
  return f;
}

Distribution make_bkw(const VelocityGrid& grid, double K, double rho) {
  if (!(K >= 0.6) || !(K <= 1.0))
    throw std::invalid_argument("make_bkw: K must lie in [3/5, 1]");
  const double pref = rho / std::pow(2.0 * M_PI * K, 1.5);
  auto f = sample_radial_free(grid, [&](const Vec3& v) {
    const double r2 = norm2(v);
    return pref * std::exp(-0.5 * r2 / K) *
           ((5.0 * K - 3.0) / (2.0 * K) + (1.0 - K) / (2.0 * K * K) * r2);
  });
  f.nonnegative = true;
  return f;
}

FamilyKind parse_family_kind(const std::string& name) {
  if (name == "gaussian_mixture") return FamilyKind::GaussianMixture;
  if (name == "bump_sum") return FamilyKind::BumpSum;
  if (name == "indicator_smoothed") return FamilyKind::IndicatorSmoothed;
  if (name == "random_band_limited") return FamilyKind::RandomBandLimited;
  throw std::invalid_argument("unknown function family: " + name);
}

std::vector<Distribution> generate_family(const VelocityGrid& grid, FamilyKind kind,
                                          int count, std::uint64_t seed,
                                          double band_xi_max) {
  if (count < 1) throw std::invalid_argument("generate_family: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double L = grid.half_width();
  std::vector<Distribution> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    switch (kind) {
      case FamilyKind::GaussianMixture: {
        const int comps = 1 + static_cast<int>(uni(rng) * 3);
        std::vector<Vec3> centers(comps);
        std::vector<double> widths(comps), amps(comps);
        for (int m = 0; m < comps; ++m) {
          for (auto& x : centers[m]) x = (uni(rng) - 0.5) * 0.5 * L;
          widths[m] = 0.4 + 0.8 * uni(rng);
          amps[m] = 0.3 + uni(rng);
        }
        auto f = sample_radial_free(grid, [&](const Vec3& v) {
          double acc = 0.0;
          for (int m = 0; m < comps; ++m) {
            const Vec3 d = {v[0] - centers[m][0], v[1] - centers[m][1],
                            v[2] - centers[m][2]};
            acc += amps[m] * std::exp(-0.5 * norm2(d) / (widths[m] * widths[m]));
          }
          return acc;
        });
        f.nonnegative = true;
        out.push_back(std::move(f));
        break;
      }
      case FamilyKind::BumpSum: {
        const int comps = 1 + static_cast<int>(uni(rng) * 3);
        std::vector<Vec3> centers(comps);
        std::vector<double> widths(comps), amps(comps);
        for (int m = 0; m < comps; ++m) {
          for (auto& x : centers[m]) x = (uni(rng) - 0.5) * 0.5 * L;
          widths[m] = 0.8 + 1.2 * uni(rng);
          amps[m] = 0.3 + uni(rng);
        }
        auto f = sample_radial_free(grid, [&](const Vec3& v) {
          double acc = 0.0;
          for (int m = 0; m < comps; ++m) {
            const Vec3 d = {v[0] - centers[m][0], v[1] - centers[m][1],
                            v[2] - centers[m][2]};
            acc += amps[m] * bump(std::sqrt(norm2(d)) / widths[m]);
          }
          return acc;
        });
        f.nonnegative = true;
        out.push_back(std::move(f));
        break;
      }
      case FamilyKind::IndicatorSmoothed: {
        const double radius = 0.7 + 1.0 * uni(rng);
        const double edge = 2.0 * grid.spacing();
        auto f = sample_radial_free(grid, [&](const Vec3& v) {
          const double r = std::sqrt(norm2(v));
          return 0.5 * (1.0 - std::tanh((r - radius) / edge));
        });
        f.nonnegative = true;
        out.push_back(std::move(f));
        break;
      }
      case FamilyKind::RandomBandLimited: {
        const double band = band_xi_max > 0.0
                                ? band_xi_max
                                : 0.4 * grid.freq_spacing() * (grid.n() / 2);
        Spectrum F(grid);
        const int n = grid.n();
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
              const Vec3 xi = grid.frequency(a, b, cc);
              if (norm2(xi) > band * band) continue;
              F.coeff[grid.index(a, b, cc)] = {gauss(rng), gauss(rng)};
            }
        // Hermitian-symmetrize so the inverse transform is real.
        Spectrum H(grid);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
              const int am = n - a, bm = n - b, cm = n - cc;
              std::complex<double> z = F.coeff[grid.index(a, b, cc)];
              if (am < n && bm < n && cm < n)
                z = 0.5 * (z + std::conj(F.coeff[grid.index(am, bm, cm)]));
              else
                z = 0.0;  // unpaired Nyquist modes dropped
              H.coeff[grid.index(a, b, cc)] = z;
            }
        out.push_back(inverse_transform(H));
        break;
      }
    }
  }
  return out;
}

std::vector<Distribution> generate_in_class(const VelocityGrid& grid, FamilyKind kind,
                                            int count, std::uint64_t seed,
                                            const UniformClassParams& params) {
  if (kind == FamilyKind::RandomBandLimited)
    throw std::invalid_argument("generate_in_class: signed families cannot enter U(D0,E0)");
  std::vector<Distribution> out;
  out.reserve(count);
  std::uint64_t attempt_seed = seed;
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > 100 * count)
      throw std::runtime_error("generate_in_class: rejection sampling stalled");
    auto cand = generate_family(grid, kind, 1, attempt_seed++)[0];
    const double target = 1.25 * params.D0;
    // Normalize mass a little above the lower bound; if the weighted moments
    // overshoot E0, temper the candidate toward the origin with a Gaussian
    // envelope (positivity-preserving) and renormalize before rejecting.
    bool accepted = false;
    for (double beta : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      Distribution trial = cand;
      if (beta > 0.0) {
        const int n = grid.n();
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              trial.values[grid.index(i, j, k)] *=
                  std::exp(-beta * norm2(grid.velocity(i, j, k)));
      }
      const double mass = norm(trial, NormRequest::lp(1.0));
      if (!(mass > 0.0)) continue;
      for (auto& x : trial.values) x *= target / mass;
      if (uniform_class_check(trial, params).member) {
        out.push_back(std::move(trial));
        accepted = true;
        break;
      }
    }
    if (!accepted) continue;
  }
  return out;
}

}  // namespace blz
