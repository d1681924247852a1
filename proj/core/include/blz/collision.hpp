#pragma once

#include <stdexcept>
#include <vector>

#include "blz/grid.hpp"
#include "blz/kernel.hpp"
#include "blz/mollifier.hpp"

namespace blz {

/// Which piece of the kinetic factor enters an evaluation.
enum class KineticPart {
  Full,     // r^gamma (tail smoothly truncated on the frequency side)
  Compact,  // r^gamma phi(r)
  Tail,     // r^gamma (1 - phi(r))
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorkspaceOptions {
  int azimuth_nodes = 8;
  // Frequency-ball truncation for the trilinear sums; 0 keeps every mode.
  double xi_max = 0.0;
  // Cap on the (xi, xi_*, sigma) triple count of a trilinear evaluation.
  double budget_cap = 8e9;
  // Tail taper radii for the frequency-side full kinetic factor at gamma != 0;
  // 0 derives them from the grid (taper from 0.5 L, cut at 0.95 L, keeping the
  // tapered factor supported inside the fundamental box).  gamma = 0 runs skip
  // the taper entirely: the constant kinetic factor has an exact closed-form
  // lattice transform.
  double tail_taper = 0.0;
  double tail_cut = 0.0;
  // Refinement factor of the semi-discrete transform tables used by the
  // gamma = 0 fast path (0 = auto from the grid size).
  int table_refine = 0;
  int table_entries = 4096;
  // Override of the cross-section's angular rule (0 = use xs defaults).
  int theta_panels = 0;
  int nodes_per_panel = 0;
};

struct FreqNode {
  int a, b, c;       // physical-order axis indices
  int m1, m2, m3;    // wavenumbers
  Vec3 xi;
  double xi_norm;
  std::size_t idx;   // row-major position in a Spectrum
};

/// One nonzero lattice sample of the compact kinetic factor (the origin is
/// dropped: its gain and loss contributions cancel identically).
struct KineticSample {
  Vec3 z;
  double w;  // Phi_c(|z|)
};

/// Shared read-only precomputation for all collision evaluations on one
/// (grid, cross-section) pair: angular rule, transform tables of the kinetic
/// factor, and the retained frequency ball.
///
/// The compact part is transformed as the *lattice* sum over its nonzero
/// samples rather than as a continuum radial integral: that convention, with
/// periodic wavenumber arithmetic, makes the frequency-side sums agree with
/// the velocity-lattice pair quadratures to the accuracy of the sigma rule
/// alone.  At gamma = 0 the full factor is constant and its lattice transform
/// collapses to a Dirichlet comb, which turns the gain term into two
/// semi-discrete transform evaluations per (xi, sigma) node.
class CollisionWorkspace {
 public:
  CollisionWorkspace(const VelocityGrid& grid, const CrossSection& xs,
                     const WorkspaceOptions& opt = {});

  const VelocityGrid& grid() const { return grid_; }
  const CrossSection& xs() const { return xs_; }
  const WorkspaceOptions& options() const { return opt_; }
  const AngularRule& rule() const { return rule_; }
  const std::vector<FreqNode>& ball() const { return ball_; }
  double r_gamma_origin() const { return r_gamma_origin_; }
  bool maxwell() const { return xs_.gamma == 0.0; }
  const std::vector<KineticSample>& compact_samples() const { return z_compact_; }
  double tail_taper_radius() const { return taper_; }
  double tail_cut_radius() const { return cut_; }

  // Continuum radial transforms (the smooth-tail route and diagnostics).
  double phi_hat(double xi_norm, KineticPart part) const {
    switch (part) {
      case KineticPart::Compact: return phi_c_(xi_norm);
      case KineticPart::Full: return phi_total_(xi_norm);
      case KineticPart::Tail: return phi_total_(xi_norm) - phi_c_(xi_norm);
    }
    return 0.0;
  }
  // Lattice transform of the compact part at an arbitrary frequency.
  double compact_hat(const Vec3& eta) const;
  // Kinetic factor at relative speed r (r > 0), by part, including the tail
  // taper used on the frequency side (identity at gamma = 0).
  double phi_velocity(double r, KineticPart part) const;

  // Per-(mode, z-sample) angular sums sum_sigma w b (e^{i z.xi^-} - 1),
  // shared by every compact-part frequency evaluation; built on first use.
  const std::vector<std::complex<double>>& compact_angular_table() const;

  void check_budget(std::size_t outer, std::size_t inner) const;

 private:
  VelocityGrid grid_;
  CrossSection xs_;
  WorkspaceOptions opt_;
  AngularRule rule_;
  RadialTable phi_c_;
  RadialTable phi_total_;
  std::vector<FreqNode> ball_;
  std::vector<KineticSample> z_compact_;
  double r_gamma_origin_ = 0.0;  // cell-averaged r^gamma at coincident points
  double taper_ = 0.0, cut_ = 0.0;
  mutable std::vector<std::complex<double>> k_table_;  // ball x z_compact
};

/// Symmetric weak form of Definition-1.1 type:
/// (1/2) h^6 sum_{v,v_*} sum_sigma w B g(v_*) f(v) [psi(v')+psi(v'_*)-psi(v)-psi(v_*)].
double weak_form_pairing(const Distribution& g, const Distribution& f,
                         const Distribution& psi, const CollisionWorkspace& ws,
                         KineticPart part = KineticPart::Full);

/// One-sided form h^6 sum sum_sigma w B g(v_*) f(v) [phi(v') - phi(v)],
/// the pre/post change-of-variables representation of (Q(g,f), phi).
double one_sided_pairing(const Distribution& g, const Distribution& f,
                         const Distribution& phi, const CollisionWorkspace& ws,
                         KineticPart part = KineticPart::Full);

/// Frequency-side trilinear sum
/// (2L)^{-6} sum_{xi,xi_*} sum_sigma w b [PhiHat(xi_*-xi^-) - PhiHat(xi_*)]
///   f_star(xi_*) g(xi-xi_*) conj(h(xi)),  xi^- = (xi - |xi| sigma)/2.
/// The first argument occupies the xi_* slot.
double trilinear_qc(const Spectrum& f_star, const Spectrum& g, const Spectrum& h,
                    const CollisionWorkspace& ws,
                    KineticPart part = KineticPart::Compact);

/// Spectrum of Q(g,f) assembled mode-by-mode on the retained ball; exact
/// Hermitian symmetry and exactly zero mass mode.
Spectrum apply_q_hat(const Spectrum& g_star, const Spectrum& f,
                     const CollisionWorkspace& ws,
                     KineticPart part = KineticPart::Full);

Distribution apply_q(const Distribution& g, const Distribution& f,
                     const CollisionWorkspace& ws,
                     KineticPart part = KineticPart::Full);

/// (M Q(f,g) - Q(f, M g), h), evaluated frequency-side as the trilinear sum
/// with the extra factor (M(xi) - M(xi - xi_*)).
double commutator_pairing(const Distribution& f, const Distribution& g,
                          const Distribution& h, const MollifierSymbol& M,
                          const CollisionWorkspace& ws,
                          KineticPart part = KineticPart::Full);

/// Direct quadrature of the cancellation pairing
/// h^6 sum sum_sigma w b Phi g(v_*) [F(v') - F(v)].
double cancellation_integral(const Distribution& g, const Distribution& F,
                             const CollisionWorkspace& ws,
                             KineticPart part = KineticPart::Full);

struct CoercivePairing {
  double pairing = 0.0;       // -(Q(g,f), f)
  double c_gamma = 0.0;       // iiint b r^gamma g_* (f'-f)^2
  double cancellation = 0.0;  // iiint b r^gamma g_* (f'^2-f^2), same interpolant
};

/// Single-pass evaluation sharing one interpolant of f, so that
/// pairing = c_gamma/2 - cancellation/2 holds to round-off.
CoercivePairing coercive_pairing(const Distribution& g, const Distribution& f,
                                 const CollisionWorkspace& ws,
                                 KineticPart part = KineticPart::Full);

/// Loss term f(v) * (integral of b over sigma) * (Phi * g)(v), for
/// diagnostics and time-step bounds.
Distribution loss_term(const Distribution& g, const Distribution& f,
                       const CollisionWorkspace& ws);

/// Sum of the angular-rule weights times b (the total sigma mass of the rule).
double angular_mass(const CollisionWorkspace& ws);

}  // namespace blz
