#pragma once

#include <string>
#include <vector>

#include "blz/collision.hpp"
#include "blz/functionals.hpp"
#include "blz/mollifier.hpp"

namespace blz {

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitCase {
  double lhs = 0.0;
  double a_term = 0.0;  // coefficient of the fitted lower/upper constant
  double b_term = 0.0;  // coefficient of the companion constant (0 if unused)
  double ratio = 0.0;
};

struct FitReport {
  std::string inequality_id;
  std::vector<FitCase> cases;
  double c_fit = 0.0;          // fitted coercive/lower constant (0 if unused)
  double big_c_fit = 0.0;      // fitted companion/upper constant
  double sup_ratio = 0.0;      // for single-constant forms
  std::vector<double> trail;   // fitted constants across refinement levels
  std::string verdict;         // pass | fail | inconclusive
  std::string detail;
  std::uint64_t seed = 0;
};

/// Shared two-parameter fit for forms  lhs >= c*A - C*B:
/// sweep C over a log grid, c(C) = min_i (lhs_i + C B_i)/A_i, take the
/// smallest C reaching positivity and report c at twice that C.
struct TwoParamFit {
  double c = 0.0;
  double C = 0.0;
  bool feasible = false;
};
TwoParamFit fit_lower_bound(const std::vector<double>& lhs,
                            const std::vector<double>& a,
                            const std::vector<double>& b);

enum class CoercivityVariant { Uniform, SoftWeighted };  // (2.2) vs (2.3)

FitReport check_coercivity(const std::vector<Distribution>& g_family,
                           const std::vector<Distribution>& f_family,
                           CoercivityVariant variant, double s_prime,
                           const CollisionWorkspace& ws);

FitReport check_entropy_coercivity(const std::vector<Distribution>& f_family,
                                   const CollisionWorkspace& ws);

/// max_cases > 0 thins a triple-product sweep to ~max_cases cases by a
/// deterministic stride through the lexicographic (f,g,h) index.
FitReport check_upper_bound(const std::vector<Distribution>& f_family,
                            const std::vector<Distribution>& g_family,
                            const std::vector<Distribution>& h_family, double r,
                            double ell, const CollisionWorkspace& ws,
                            int max_cases = 0);

enum class CommutatorCase { LowOrder, HighOrder };  // s'+lambda < 3/2 vs >= 3/2

FitReport check_commutator(const std::vector<Distribution>& f_family,
                           const std::vector<Distribution>& g_family,
                           const std::vector<Distribution>& h_family, double lambda,
                           double n0, const std::vector<double>& delta_set,
                           double s_prime, const CollisionWorkspace& ws,
                           int max_cases = 0);

FitReport check_interpolation_sobolev(const std::vector<Distribution>& f_family,
                                      double k, double p, double delta_interp);

FitReport check_interpolation_lq(const std::vector<Distribution>& f_family,
                                 const std::vector<double>& p_set,
                                 const std::vector<double>& q_fractions,
                                 const std::vector<double>& ell_set);

/// Random-pair sweep of the mollifier difference bounds; sup lhs/rhs per
/// delta, stability across delta and under sample doubling.
FitReport check_mollifier_difference(const MollifierSymbol& base, double p,
                                     const std::vector<double>& delta_set,
                                     int n_pairs, double xi_max, std::uint64_t seed,
                                     bool p_moderated);

FitReport check_symbol_derivative(const MollifierSymbol& base,
                                  const std::vector<double>& delta_set, double xi_max,
                                  int n_samples, std::uint64_t seed);

}  // namespace blz
