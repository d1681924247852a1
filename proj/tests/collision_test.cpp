#include <cmath>
#include <complex>

#include "doctest.h"

#include "blz/collision.hpp"
#include "blz/families.hpp"
#include "blz/functionals.hpp"

using namespace blz;

namespace {

// Small grids and a coarse angular rule keep the direct pair quadratures
// affordable; both routes share the sigma rule, so route agreement is
// independent of its coarseness.
CollisionWorkspace small_ws(double gamma, int n = 6, double L = 4.0,
                            double theta_min = 0.2) {
  CrossSection xs;
  xs.gamma = gamma;
  xs.s = 0.25;
  xs.theta_min = theta_min;
  WorkspaceOptions opt;
  opt.theta_panels = 8;
  opt.nodes_per_panel = 6;
  opt.azimuth_nodes = 16;
  opt.budget_cap = 1e12;
  return CollisionWorkspace(make_grid(n, L), xs, opt);
}

double l2_pair(const Distribution& a, const Distribution& b) {
  const double h3 = std::pow(a.grid.spacing(), 3);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    acc += a.values[i] * b.values[i];
  return h3 * acc;
}

}  // namespace

TEST_CASE("compact z-route matches the velocity-lattice pair quadrature") {
  const auto ws = small_ws(0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 3, 11);
  const auto F = forward_transform(fam[0]);
  const auto G = forward_transform(fam[1]);
  const auto H = forward_transform(fam[2]);
  const double spectral = trilinear_qc(F, G, H, ws, KineticPart::Compact);
  const double direct = one_sided_pairing(fam[0], fam[1], fam[2], ws,
                                          KineticPart::Compact);
  CHECK(spectral == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("compact z-route agreement persists for a soft potential") {
  const auto ws = small_ws(-0.5);
  const auto fam = generate_family(ws.grid(), FamilyKind::BumpSum, 3, 21);
  const double spectral =
      trilinear_qc(forward_transform(fam[0]), forward_transform(fam[1]),
                   forward_transform(fam[2]), ws, KineticPart::Compact);
  const double direct = one_sided_pairing(fam[0], fam[1], fam[2], ws,
                                          KineticPart::Compact);
  CHECK(spectral == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("constant-factor fast path matches the pair quadrature") {
  const auto ws = small_ws(0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 3, 31);
  const double spectral =
      trilinear_qc(forward_transform(fam[0]), forward_transform(fam[1]),
                   forward_transform(fam[2]), ws, KineticPart::Full);
  const double direct = one_sided_pairing(fam[0], fam[1], fam[2], ws,
                                          KineticPart::Full);
  CHECK(spectral == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("weak form equals the symmetrized one-sided form") {
  const auto ws = small_ws(0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 3, 41);
  const double weak = weak_form_pairing(fam[0], fam[1], fam[2], ws,
                                        KineticPart::Compact);
  const double sym =
      0.5 * (one_sided_pairing(fam[0], fam[1], fam[2], ws, KineticPart::Compact) +
             one_sided_pairing(fam[1], fam[0], fam[2], ws, KineticPart::Compact));
  CHECK(weak == doctest::Approx(sym).epsilon(1e-10));
}

TEST_CASE("assembled operator pairs like the direct quadrature") {
  const auto ws = small_ws(0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 51);
  // The assembled operator clears the unpaired frequency planes, so pair it
  // against a band-limited test function that carries none of them.
  const auto h = generate_family(ws.grid(), FamilyKind::RandomBandLimited, 1, 52,
                                 2.0);
  const auto q = apply_q(fam[0], fam[1], ws);
  const double via_operator = l2_pair(q, h[0]);
  const double direct = one_sided_pairing(fam[0], fam[1], h[0], ws,
                                          KineticPart::Full);
  CHECK(via_operator == doctest::Approx(direct).epsilon(1e-5));
}

TEST_CASE("operator spectrum is Hermitian with an exactly zero mass mode") {
  const auto ws = small_ws(0.5, 8);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 61);
  const auto Q = apply_q_hat(forward_transform(fam[0]), forward_transform(fam[1]), ws);
  const auto& g = ws.grid();
  const int n = g.n();
  CHECK(std::abs(Q.coeff[g.index(n / 2, n / 2, n / 2)]) == 0.0);
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b)
      for (int c = 1; c < n; ++c) {
        const auto z = Q.coeff[g.index(a, b, c)];
        const auto zm = Q.coeff[g.index(n - a, n - b, n - c)];
        CHECK(std::abs(z - std::conj(zm)) < 1e-12);
      }
  // Mass-mode annihilation shows up physically: the collision output
  // integrates to zero.
  const auto q = apply_q(fam[0], fam[1], ws);
  CHECK(quadrature(q, WeightSpec::unit()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("equilibrium annihilation at desk scale") {
  // T = 1 balances the box-truncation and frequency-aliasing floors on the
  // small lattice; the residual is quadrature floor, not operator error.
  const auto ws = small_ws(0.0, 8, 4.0, 0.05);
  const auto m = make_maxwellian(ws.grid(), 1.0, {0.0, 0.0, 0.0}, 1.0);
  const auto q = apply_q(m, m, ws);
  CHECK(norm(q, NormRequest::lp(2.0)) / norm(m, NormRequest::lp(2.0)) < 2e-2);
}

TEST_CASE("single-pass coercive evaluation satisfies its internal identity") {
  const auto ws = small_ws(0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 71);
  const auto cp = coercive_pairing(fam[0], fam[1], ws);
  CHECK(cp.c_gamma >= 0.0);
  CHECK(cp.pairing ==
        doctest::Approx(0.5 * cp.c_gamma - 0.5 * cp.cancellation)
            .epsilon(1e-10));
  // And the pairing agrees with the assembled-operator route.
  const auto F = forward_transform(fam[1]);
  const double fast = -trilinear_qc(forward_transform(fam[0]), F, F, ws,
                                    KineticPart::Full);
  CHECK(cp.pairing == doctest::Approx(fast).epsilon(1e-5));
}

TEST_CASE("cancellation pairing equals the collision form against unit f") {
  const auto ws = small_ws(0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 81);
  Distribution big_f(ws.grid());
  for (auto& x : big_f.values) x = 1.0;
  const double via_one_sided = one_sided_pairing(fam[0], big_f, fam[1], ws,
                                                 KineticPart::Compact);
  const double direct = cancellation_integral(fam[0], fam[1], ws,
                                              KineticPart::Compact);
  CHECK(direct == doctest::Approx(via_one_sided).epsilon(1e-10));
}

TEST_CASE("trivial symbol commutes with the collision operator") {
  const auto ws = small_ws(0.0, 8);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 3, 91);
  MollifierSymbol flat;  // identically 1
  const double comm = commutator_pairing(fam[0], fam[1], fam[2], flat, ws);
  const double scale = std::abs(
      l2_pair(apply_q(fam[0], fam[1], ws), fam[2]));
  CHECK(std::abs(comm) < 1e-10 * std::max(scale, 1.0));
}

TEST_CASE("commutator pairing matches its two-application definition") {
  const auto ws = small_ws(0.0, 8);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 101);
  // Band-limited test function: the two-application route goes through the
  // assembled operator, whose unpaired-plane clearing must not enter the
  // comparison.
  const auto h = generate_family(ws.grid(), FamilyKind::RandomBandLimited, 1, 102,
                                 3.0);
  MollifierSymbol M;
  M.lambda = 1.0;
  M.delta = 0.1;
  M.n0 = 2.0;
  const double via_pairing = commutator_pairing(fam[0], fam[1], h[0], M, ws);
  const auto m_q = apply_mollifier(apply_q(fam[0], fam[1], ws), M);
  const auto q_m = apply_q(fam[0], apply_mollifier(fam[1], M), ws);
  Distribution diff(ws.grid());
  for (std::size_t i = 0; i < diff.values.size(); ++i)
    diff.values[i] = m_q.values[i] - q_m.values[i];
  const double direct = l2_pair(diff, h[0]);
  CHECK(via_pairing == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("loss term and angular mass") {
  const auto ws = small_ws(0.0);
  CHECK(angular_mass(ws) > 0.0);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 111);
  const auto loss = loss_term(fam[0], fam[1], ws);
  // With a constant kinetic factor the loss is f * A * (mass of g).
  const double a = angular_mass(ws);
  const double mg = quadrature(fam[0], WeightSpec::unit());
  const auto& g = ws.grid();
  const std::size_t mid = g.index(3, 3, 3);
  CHECK(loss.values[mid] ==
        doctest::Approx(fam[1].values[mid] * a * mg).epsilon(1e-8));
}

TEST_CASE("budget guard rejects oversized sweeps") {
  CrossSection xs;
  WorkspaceOptions opt;
  opt.budget_cap = 10.0;
  const CollisionWorkspace ws(make_grid(8, 4.0), xs, opt);
  const auto fam = generate_family(ws.grid(), FamilyKind::GaussianMixture, 2, 121);
  CHECK_THROWS_AS(one_sided_pairing(fam[0], fam[1], fam[0], ws), BudgetExceeded);
}

TEST_CASE("workspace validates grid compatibility") {
  CrossSection xs;
  const CollisionWorkspace ws(make_grid(8, 4.0), xs, {});
  Distribution other(make_grid(6, 4.0));
  Distribution mine(ws.grid());
  CHECK_THROWS(apply_q(other, mine, ws));
}
