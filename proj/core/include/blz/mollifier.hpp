#pragma once

#include <cstdint>

#include "blz/grid.hpp"

namespace blz {

/// Frequency multiplier M_lambda^delta(xi) = <xi>^lambda / (1 + delta <xi>)^N0,
/// a delta-regularized differentiation of order lambda.
struct MollifierSymbol {
  double lambda = 0.0;
  double delta = 0.0;  // in [0,1]; 0 is the limit symbol <xi>^lambda
  double n0 = 0.0;

  void validate() const;
  double value_at_bracket(double bracket) const;  // bracket = <xi> >= 1
  double operator()(const Vec3& xi) const;
};

/// Time-dependent order lambda(t) = N t + a with fixed (delta, N0).
struct MollifierSchedule {
  double N = 1.0;  // regularity gain rate
  double a = 0.0;  // starting order
  double delta = 0.0;
  double n0 = 0.0;

  double lambda_at(double t) const { return N * t + a; }
  MollifierSymbol symbol_at(double t) const;
  // Constraint tags for the configured kinetic parameters over [t0, t1]:
  // "restriction": 5 + gamma >= 2(N0 - lambda(t));
  // "slight":      4 + gamma + 2s > 2(N0 - lambda(t)).
  bool satisfies_restriction(double gamma, double t0, double t1) const;
  bool satisfies_slight(double gamma, double s, double t0, double t1) const;
};

Spectrum apply_mollifier(const Spectrum& F, const MollifierSymbol& M);
Distribution apply_mollifier(const Distribution& f, const MollifierSymbol& M);

/// Fitted constants of the derivative bound |d^alpha M| <= C_alpha M <xi>^{-|alpha|},
/// by central finite differences over a radial/random sample.
struct DerivativeBoundReport {
  double c1 = 0.0;  // sup over first-order derivatives and sample
  double c2 = 0.0;  // sup over second-order derivatives and sample
  int samples = 0;
};

DerivativeBoundReport symbol_derivative_bound_check(const MollifierSymbol& M,
                                                    double xi_max, int n_samples,
                                                    std::uint64_t seed);

enum class DiffRegion {
  StarLarge,     // <xi_*> >= sqrt(2)|xi|
  Intermediate,  // sqrt(2)|xi| > <xi_*> >= |xi|/2
  StarSmall,     // |xi|/2 > <xi_*>
};

/// Two-sided difference bound |M(xi) - M(xi - xi_*)| <= C * rhs, with both
/// right-hand sides assembled at C = 1; rhs_b requires p >= N0 - lambda.
struct DifferenceBound {
  double lhs = 0.0;
  double rhs_a = 0.0;  // unconditioned bound
  double rhs_b = 0.0;  // p-moderated bound
  DiffRegion region = DiffRegion::StarLarge;
};

DifferenceBound difference_bound_check(const Vec3& xi, const Vec3& xi_star,
                                       const MollifierSymbol& M, double p);

}  // namespace blz
