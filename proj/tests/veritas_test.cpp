#include <cmath>

#include "doctest.h"

#include "blz/families.hpp"
#include "blz/veritas.hpp"

using namespace blz;

namespace {

CollisionWorkspace ws8(double gamma, double s = 0.25) {
  CrossSection xs;
  xs.gamma = gamma;
  xs.s = s;
  xs.theta_min = 0.05;
  WorkspaceOptions opt;
  opt.azimuth_nodes = 8;
  opt.table_refine = 8;
  opt.budget_cap = 1e12;
  return CollisionWorkspace(make_grid(8, 4.0), xs, opt);
}

}  // namespace

TEST_CASE("two-parameter fit recovers a constructed lower bound") {
  std::vector<double> lhs, a, b;
  for (int i = 1; i <= 12; ++i) {
    const double ai = 0.5 + 0.1 * i, bi = 0.2 + 0.05 * (i % 4);
    a.push_back(ai);
    b.push_back(bi);
    lhs.push_back(2.0 * ai - 3.0 * bi);
  }
  const auto fit = fit_lower_bound(lhs, a, b);
  REQUIRE(fit.feasible);
  CHECK(fit.c > 0.0);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    CHECK(lhs[i] >= fit.c * a[i] - fit.C * b[i] - 1e-12);

  // No companion term and negative data: infeasible.
  const auto bad = fit_lower_bound({-1.0, -2.0}, {1.0, 1.0}, {0.0, 0.0});
  CHECK_FALSE(bad.feasible);
}

TEST_CASE("coercivity fit passes on a small class family") {
  const auto ws = ws8(0.0);
  UniformClassParams params;
  params.D0 = 1.0;
  params.E0 = 4.0;
  const auto g_fam =
      generate_in_class(ws.grid(), FamilyKind::GaussianMixture, 4, 301, params);
  const auto f_fam = generate_family(ws.grid(), FamilyKind::RandomBandLimited, 4,
                                     302, 3.0);
  const auto rep =
      check_coercivity(g_fam, f_fam, CoercivityVariant::Uniform, 0.0, ws);
  CHECK(rep.verdict == "pass");
  CHECK(rep.c_fit > 0.0);
  CHECK(rep.cases.size() == 16);
  REQUIRE(rep.trail.size() == 2);
  const double drift = std::max(rep.trail[0], rep.trail[1]) /
                       std::min(rep.trail[0], rep.trail[1]);
  CHECK(drift < 2.0);

  // The soft-weighted variant needs gamma + 2s <= 0.
  const auto soft_ws = ws8(-0.5);
  const auto soft = check_coercivity(g_fam, f_fam,
                                     CoercivityVariant::SoftWeighted, 0.2,
                                     soft_ws);
  CHECK(soft.verdict == "pass");
  CHECK(soft.c_fit > 0.0);

  // Out of hypothesis range: inconclusive, not fail.
  const auto inc = check_coercivity(g_fam, f_fam,
                                    CoercivityVariant::SoftWeighted, 0.2, ws);
  CHECK(inc.verdict == "inconclusive");
}

TEST_CASE("entropy-dissipation coercivity fit on positive data") {
  const auto ws = ws8(-0.5, 0.5);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 4, 311);
  const auto rep = check_entropy_coercivity(fam, ws);
  CHECK(rep.verdict == "pass");
  CHECK(rep.c_fit > 0.0);
  CHECK(rep.cases.size() == 4);
}

TEST_CASE("trilinear upper bound has a finite constant") {
  const auto ws = ws8(0.0);
  const auto f = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 321);
  const auto g = generate_family(ws.grid(), FamilyKind::BumpSum, 2, 322);
  const auto h = generate_family(ws.grid(), FamilyKind::RandomBandLimited, 2, 323,
                                 3.0);
  // gamma = 0, s = 1/4: r must sit in [2s-1, 2s] and ell in [0, gamma+2s].
  const auto rep = check_upper_bound(f, g, h, 0.5, 0.5, ws, 6);
  CHECK(rep.verdict == "pass");
  CHECK(std::isfinite(rep.sup_ratio));
  CHECK(rep.sup_ratio > 0.0);
  CHECK(int(rep.cases.size()) <= 8);
}

TEST_CASE("commutator bound is delta-stable on a small sweep") {
  const auto ws = ws8(0.0);
  const auto f = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 331);
  const auto g = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 332);
  const auto h = generate_family(ws.grid(), FamilyKind::RandomBandLimited, 2, 333,
                                 3.0);
  const auto rep = check_commutator(f, g, h, 1.0, 2.5, {1.0, 1e-1, 1e-2}, 0.2, ws,
                                    8);
  CHECK(rep.verdict == "pass");
  CHECK(std::isfinite(rep.sup_ratio));
  CHECK(rep.sup_ratio > 0.0);
  CHECK(rep.trail.size() == 3);  // one sup per delta
}

TEST_CASE("interpolation inequalities at constant 2") {
  const auto grid = make_grid(16, 4.0);
  const auto f1 = generate_family(grid, FamilyKind::GaussianMixture, 3, 341);
  const auto f2 = generate_family(grid, FamilyKind::BumpSum, 3, 342);
  std::vector<Distribution> fam = f1;
  fam.insert(fam.end(), f2.begin(), f2.end());

  const auto sob = check_interpolation_sobolev(fam, 1.0, 2.0, 0.5);
  CHECK(sob.verdict == "pass");
  CHECK(sob.sup_ratio <= 1.0);

  const auto lq = check_interpolation_lq(fam, {1.5, 2.0, 4.0}, {0.25, 0.5, 0.75},
                                         {0.0, 1.0, 2.0});
  CHECK(lq.verdict == "pass");
  CHECK(lq.cases.size() == 6 * 3 * 3 * 3);
  CHECK(lq.sup_ratio <= 1.0);
  for (const auto& c : lq.cases) CHECK(c.ratio <= 1.0 + 1e-8);
}

TEST_CASE("mollifier difference sweep is delta-uniform") {
  MollifierSymbol M;
  M.lambda = 2.0;
  M.n0 = 4.0;
  const auto rep = check_mollifier_difference(M, 2.0, {1.0, 1e-1, 1e-2, 1e-3},
                                              100000, 40.0, 424242, false);
  CHECK(rep.verdict == "pass");
  CHECK(std::isfinite(rep.sup_ratio));
  CHECK(rep.trail.size() == 4);

  const auto mod = check_mollifier_difference(M, 2.0, {1.0, 1e-1, 1e-2, 1e-3},
                                              100000, 40.0, 424242, true);
  CHECK(mod.verdict == "pass");

  // Hypothesis violation (p < N0 - lambda) is inconclusive, not a failure.
  const auto inc = check_mollifier_difference(M, 1.0, {1.0, 1e-1}, 1000, 40.0,
                                              4242, true);
  CHECK(inc.verdict == "inconclusive");
}

TEST_CASE("symbol derivative sweep fits finite constants") {
  MollifierSymbol M;
  M.lambda = 2.0;
  M.n0 = 3.0;
  const auto rep =
      check_symbol_derivative(M, {1.0, 1e-1, 1e-2, 0.0}, 30.0, 2000, 555);
  CHECK(rep.verdict == "pass");
  CHECK(std::isfinite(rep.c_fit));
  CHECK(std::isfinite(rep.big_c_fit));
  CHECK(rep.trail.size() == 4);
}
