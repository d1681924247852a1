#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "blz/collision.hpp"
#include "blz/kernel.hpp"

namespace blz {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSection {
  int n_points = 16;
  double half_width = 4.0;
};

struct TimeSection {
  double dt = 0.01;
  double t_end = 1.0;
  std::string scheme = "rk4";
  int checkpoints = 10;
};

struct InitialSection {
  // maxwellian | bkw | ball_indicator | gaussian_mixture | bump_sum |
  // indicator_smoothed | random_band_limited
  std::string type = "maxwellian";
  double rho = 1.0;
  double temperature = 1.0;
  Vec3 velocity = {0.0, 0.0, 0.0};
  double k_shape = 0.65;        // bkw shape parameter
  double radius = 1.0;          // ball indicator
  double perturbation = 0.0;    // relative bump added to a maxwellian
};

struct ScheduleSection {
  double N = 1.0;
  double a = 0.0;
  double n0 = 0.0;  // 0 requests the default n0 = a + (5 + gamma)/2
  double delta = 0.0;
  std::vector<double> delta_set = {1.0, 1e-1, 1e-2, 1e-3};
};

struct VerifySection {
  std::string inequality;
  int family_count = 20;
  int samples = 100000;
  double s_prime = 0.2;
  double r = 0.5;    // upper-bound slice
  double ell = 0.0;  // upper-bound slice
  double lambda = 2.0;
  double p = 2.0;
  double k = 1.0;
  double delta_interp = 0.5;
  double d0 = 1.0;
  double e0 = 4.0;
  double xi_range = 32.0;  // sampling cube half-width for pointwise sweeps
  int max_cases = 200;     // thinning cap for triple-product sweeps
};

struct RunSection {
  bool deterministic = true;
  std::uint64_t seed = 1234;
  std::string output_dir = "out";
};

struct RunConfig {
  int schema_version = 1;
  GridSection grid;
  CrossSection cross_section;
  WorkspaceOptions collision;
  TimeSection time;
  InitialSection initial;
  ScheduleSection schedule;
  VerifySection verify;
  RunSection run;
  std::string regime;  // derived from (gamma, s)

  void validate();  // throws ConfigError naming the violated condition
};

/// hard: gamma > 0; moderately-soft: 0 >= gamma > max(-2s, -1);
/// very-soft: -1 >= gamma > -2s; anything else is outside the theory.
std::string regime_tag(double gamma, double s);

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical key/value rendering (stable order), used for manifests and hashing.
std::string serialize_config(const RunConfig& cfg);
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 14695981039346656037ull);
std::string config_hash(const RunConfig& cfg);

}  // namespace blz
