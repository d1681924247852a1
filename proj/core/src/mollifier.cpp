#include "blz/mollifier.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace blz {

void MollifierSymbol::validate() const {
  if (!(delta >= 0.0) || !(delta <= 1.0))
    throw std::invalid_argument("MollifierSymbol: delta must lie in [0,1]");
  if (!std::isfinite(lambda) || !std::isfinite(n0))
    throw std::invalid_argument("MollifierSymbol: non-finite parameter");
}

double MollifierSymbol::value_at_bracket(double bracket) const {
  return std::pow(bracket, lambda) / std::pow(1.0 + delta * bracket, n0);
}

double MollifierSymbol::operator()(const Vec3& xi) const {
  return value_at_bracket(std::sqrt(1.0 + norm2(xi)));
}

MollifierSymbol MollifierSchedule::symbol_at(double t) const {
  MollifierSymbol M;
  M.lambda = lambda_at(t);
  M.delta = delta;
  M.n0 = n0;
  return M;
}

bool MollifierSchedule::satisfies_restriction(double gamma, double t0, double t1) const {
  // lambda(t) monotone, so checking the endpoint with smallest lambda suffices.
  const double lam = std::min(lambda_at(t0), lambda_at(t1));
  return 5.0 + gamma >= 2.0 * (n0 - lam);
}

bool MollifierSchedule::satisfies_slight(double gamma, double s, double t0,
                                         double t1) const {
  const double lam = std::min(lambda_at(t0), lambda_at(t1));
  return 4.0 + gamma + 2.0 * s > 2.0 * (n0 - lam);
}

Spectrum apply_mollifier(const Spectrum& F, const MollifierSymbol& M) {
  M.validate();
  Spectrum out(F.grid);
  const int n = F.grid.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const std::size_t idx = F.grid.index(a, b, c);
        out.coeff[idx] = F.coeff[idx] * M(F.grid.frequency(a, b, c));
      }
  return out;
}

Distribution apply_mollifier(const Distribution& f, const MollifierSymbol& M) {
  return inverse_transform(apply_mollifier(forward_transform(f), M));
}

DerivativeBoundReport symbol_derivative_bound_check(const MollifierSymbol& M,
                                                    double xi_max, int n_samples,
                                                    std::uint64_t seed) {
  M.validate();
  if (n_samples < 1 || !(xi_max > 0.0))
    throw std::invalid_argument("symbol_derivative_bound_check: degenerate sampling spec");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  DerivativeBoundReport rep;
  rep.samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    Vec3 xi;
    if (i == 0) {
      xi = {0.0, 0.0, 0.0};  // origin always included: <xi> >= 1, no singularity
    } else {
      for (auto& x : xi) x = uni(rng) * xi_max;
    }
    const double bracket = std::sqrt(1.0 + norm2(xi));
    const double m0 = M(xi);
    const double h = 1e-4 * bracket;
    double d1[3];
    for (int d = 0; d < 3; ++d) {
      Vec3 p = xi, q = xi;
      p[d] += h;
      q[d] -= h;
      d1[d] = (M(p) - M(q)) / (2.0 * h);
      rep.c1 = std::max(rep.c1, std::abs(d1[d]) * bracket / m0);
    }
    for (int d = 0; d < 3; ++d)
      for (int e = d; e < 3; ++e) {
        double d2;
        if (d == e) {
          Vec3 p = xi, q = xi;
          p[d] += h;
          q[d] -= h;
          d2 = (M(p) - 2.0 * m0 + M(q)) / (h * h);
        } else {
          Vec3 pp = xi, pm = xi, mp = xi, mm = xi;
          pp[d] += h; pp[e] += h;
          pm[d] += h; pm[e] -= h;
          mp[d] -= h; mp[e] += h;
          mm[d] -= h; mm[e] -= h;
          d2 = (M(pp) - M(pm) - M(mp) + M(mm)) / (4.0 * h * h);
        }
        rep.c2 = std::max(rep.c2, std::abs(d2) * bracket * bracket / m0);
      }
  }
  return rep;
}

DifferenceBound difference_bound_check(const Vec3& xi, const Vec3& xi_star,
                                       const MollifierSymbol& M, double p) {
  M.validate();
  if (p < M.n0 - M.lambda)
    throw std::invalid_argument("difference_bound_check: need p >= N0 - lambda");
  const Vec3 diff = {xi[0] - xi_star[0], xi[1] - xi_star[1], xi[2] - xi_star[2]};
  const double xi_norm = std::sqrt(norm2(xi));
  const double br_xi = std::sqrt(1.0 + norm2(xi));
  const double br_star = std::sqrt(1.0 + norm2(xi_star));
  const double br_diff = std::sqrt(1.0 + norm2(diff));
  const double m_xi = M(xi);
  const double m_diff = M.value_at_bracket(br_diff);
  const double m_star = M.value_at_bracket(br_star);

  DifferenceBound out;
  out.lhs = std::abs(m_xi - m_diff);
  const bool r1 = br_star >= std::sqrt(2.0) * xi_norm;
  const bool r3 = !r1 && br_star < 0.5 * xi_norm;
  const bool r2 = !r1 && !r3;
  out.region = r1 ? DiffRegion::StarLarge
                  : (r2 ? DiffRegion::Intermediate : DiffRegion::StarSmall);

  // Intermediate-region comparison factor M(xi_*)(1+delta<xi-xi_*>)^{N0}/<xi-xi_*>^lambda.
  const double mid_factor = m_star * std::pow(1.0 + M.delta * br_diff, M.n0) /
                            std::pow(br_diff, M.lambda);
  const double star_ratio = br_star / br_xi;

  out.rhs_a = 0.0;
  if (r1) out.rhs_a += std::pow(br_xi, M.lambda);
  if (br_star >= 0.5 * xi_norm) out.rhs_a += m_diff;  // spans regions 1 and 2
  if (r3) out.rhs_a += m_diff * star_ratio;
  if (r2) out.rhs_a += m_diff * mid_factor;

  out.rhs_b = 0.0;
  if (r1) out.rhs_b += m_diff * std::pow(star_ratio, p);
  if (r2) out.rhs_b += m_diff * (mid_factor + 1.0);
  if (r3) out.rhs_b += m_diff * star_ratio;
  return out;
}

}  // namespace blz
