#pragma once

#include <string>
#include <vector>

#include "blz/collision.hpp"
#include "blz/grid.hpp"

namespace blz {

/// Scalar-functional request: weighted L^p with (1+|v|)^ell weights,
/// L log L, weighted Sobolev H^k_ell (Sobolev weights use <v>^ell), entropy.
struct NormRequest {
  enum class Family { LpWeighted, LlogL, SobolevWeighted, Entropy };
  Family family = Family::LpWeighted;
  double p = 2.0;    // LpWeighted only, >= 1
  double k = 0.0;    // Sobolev order, may be negative
  double ell = 0.0;  // weight exponent

  static NormRequest lp(double p, double ell = 0.0) {
    NormRequest r; r.family = Family::LpWeighted; r.p = p; r.ell = ell; return r;
  }
  static NormRequest llogl() {
    NormRequest r; r.family = Family::LlogL; return r;
  }
  static NormRequest sobolev(double k, double ell = 0.0) {
    NormRequest r; r.family = Family::SobolevWeighted; r.k = k; r.ell = ell; return r;
  }
  static NormRequest entropy() {
    NormRequest r; r.family = Family::Entropy; return r;
  }
};

/// Floor applied inside logarithms of possibly-vanishing densities.
inline constexpr double kEntropyFloor = 1e-30;

double norm(const Distribution& f, const NormRequest& req);

struct Moments {
  double mass = 0.0;
  Vec3 momentum = {0.0, 0.0, 0.0};
  double energy = 0.0;   // (1/2) integral |v|^2 f
  double entropy = 0.0;  // integral f log f (floored)
};

Moments moments(const Distribution& f);

/// Fourth raw moment integral |v|^4 f, used by the relaxation benchmarks.
double fourth_moment(const Distribution& f);

/// D(g,f) = -iiint B (g'_* f' - g_* f) log f, via the pre/post change of
/// variables as -iiint B g_* f [log f(v') - log f(v)] (direct quadrature).
double entropy_dissipation(const Distribution& g, const Distribution& f,
                           const CollisionWorkspace& ws);

/// Same functional through the assembled operator: -(Q(g,f), log f).
/// Cheaper at large N; identical in the continuum limit.
double entropy_dissipation_operator(const Distribution& g, const Distribution& f,
                                    const CollisionWorkspace& ws);

/// Symmetrized nonnegative form for g = f:
/// (1/4) iiint B (f'f'_* - f f_*)(log f'f'_* - log f f_*).
double entropy_dissipation_symmetrized(const Distribution& f,
                                       const CollisionWorkspace& ws);

/// Sign-safe per-checkpoint estimate of D(f,f) for trajectory diagnostics:
/// a seeded importance-sampled quadrature of the symmetrized integrand at
/// full resolution.  Pairs (v, v_*) are drawn with probability proportional
/// to f(v) f(v_*) over the positive part of f, so every sample contributes
/// (1/4) B (a - b)(log a - log b) >= 0 and the estimate is nonnegative by
/// construction; the operator route -(Q, log f) pairs tail-level noise in Q
/// against log-floor values and can return small negatives.  Deterministic
/// for a fixed seed.
double entropy_dissipation_checkpoint(const Distribution& f,
                                      const CollisionWorkspace& ws,
                                      int samples = 50000,
                                      unsigned long long seed = 0x5eedULL);

/// Spectral restriction onto a coarser lattice over the same box (retains
/// wavenumbers below the coarse Nyquist limit).
Distribution spectral_restrict(const Distribution& f, int coarse_n);

struct UniformClassParams {
  double D0 = 1.0;  // mass lower bound
  double E0 = 1.0;  // L^1_2 + L log L upper bound
};

struct UniformClassRadii {
  double R = 0.0;
  double M = 0.0;
  double r0 = 0.0;
};

/// Tight thresholds R = 2 sqrt(2 E0/D0), M = e^{8E0/D0} - 1,
/// r0 = (3 D0/(16 pi e^{8E0/D0}))^{1/3}.
UniformClassRadii uniform_class_radii(double D0, double E0);

struct UniformClassReport {
  bool member = false;
  double mass = 0.0;
  double l1_2_plus_llogl = 0.0;
  UniformClassRadii radii;
  bool truncation_property = true;  // chi_{B0(R,r0)} g keeps mass >= D0/2
  std::string detail;
};

UniformClassReport uniform_class_check(const Distribution& g,
                                       const UniformClassParams& params,
                                       int center_samples = 16);

}  // namespace blz
