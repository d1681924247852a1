#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "blz/grid.hpp"

namespace blz {

/// Model cross-section B(v-v_*, sigma) = Phi_gamma(|v-v_*|) b(cos theta):
/// kinetic factor |z|^gamma with a smooth compact/tail split, and the
/// grazing-singular angular kernel b(cos theta) = K theta^{-(2+2s)} on
/// (0, pi/2].
struct CrossSection {
  double gamma = 0.0;   // kinetic power, > -3
  double s = 0.25;      // angular singularity order, in (0,1)
  double K = 1.0;       // singularity strength
  double r_in = 1.0;    // phi == 1 for r <= r_in
  double r_out = 2.0;   // phi == 0 for r >= r_out
  double theta_min = 1e-3;
  int theta_panels = 4;
  int nodes_per_panel = 4;

  void validate() const;
};

/// Quadrature over the deviation angle: nodes in (theta_min, pi/2], weights
/// absorbing sin(theta) and the azimuthal 2*pi.
struct AngularRule {
  std::vector<double> theta;
  std::vector<double> weight;   // 2*pi * sin(theta) * GL weight
  std::vector<double> b_value;  // b(cos theta) at the nodes
  double theta_min = 0.0;
};

AngularRule make_angular_rule(const CrossSection& xs);
AngularRule make_angular_rule(const CrossSection& xs, double theta_min,
                              int panels, int nodes_per_panel);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// b(cos theta) = K theta^{-(2+2s)}; rejects theta = 0 and theta > pi/2.
double angular_kernel(double cos_theta, const CrossSection& xs);

/// C^inf bridge: 1 at t <= 0, exp(1 - 1/(1-t^2)) on (0,1), 0 at t >= 1.
double smooth_bridge(double t);

/// Smooth radial cutoff: 1 on [0, r_in], exp(1 - 1/(1-t^2)) bridge, 0 beyond r_out.
double cutoff_phi(double r, const CrossSection& xs);

/// (Phi_c, Phi_cbar) = (r^gamma phi(r), r^gamma (1 - phi(r))).
std::pair<double, double> kinetic_split(double r, const CrossSection& xs);

/// Cell-averaged r^gamma over a ball of radius h/2, the value assigned to
/// coincident lattice points in velocity-space quadratures (finite for gamma > -3).
double regularized_r_gamma(double gamma, double h);

/// Radial Fourier transform 4 pi \int_0^{r_max} r^2 (r^gamma profile(r)) sinc(r|xi|) dr,
/// which equals (4 pi/|xi|) \int r sin(r|xi|) W(r) dr and its |xi| -> 0 limit.
double radial_fourier(double xi_norm, double gamma, double r_max,
                      const std::function<double(double)>& profile);

/// PhiHat_c(|xi|): transform of the compact kinetic part r^gamma phi(r).
double phi_c_hat(double xi_norm, const CrossSection& xs);

/// Dense radial table with linear interpolation, built once and shared.
class RadialTable {
 public:
  RadialTable() = default;
  static RadialTable build(double gamma, double r_max, double xi_max, int n_entries,
                           const std::function<double(double)>& profile);

  double operator()(double xi_norm) const {
    double t = xi_norm * inv_step_;
    if (t >= static_cast<double>(values_.size() - 1)) return values_.back();
    int i = static_cast<int>(t);
    double fr = t - i;
    return values_[i] + fr * (values_[i + 1] - values_[i]);
  }
  bool empty() const { return values_.empty(); }
  double xi_max() const { return xi_max_; }

 private:
  std::vector<double> values_;
  double inv_step_ = 0.0;
  double xi_max_ = 0.0;
};

RadialTable build_phi_c_table(const CrossSection& xs, double xi_max, int n_entries);
// Compact part + smoothly truncated tail (tail tapered to zero between
// r_taper and r_cut); stands in for the full kinetic factor on centrally
// supported data.
RadialTable build_phi_total_table(const CrossSection& xs, double r_taper,
                                  double r_cut, double xi_max, int n_entries);

/// sigma-representation of post-collisional velocities.
std::pair<Vec3, Vec3> collision_geometry(const Vec3& v, const Vec3& v_star,
                                         const Vec3& sigma);

/// |d(xi^+,u)/d(xi,xi_*)| = cos^2(theta/2)/4 for theta in [0, pi/2].
double jacobian_xi_plus(double theta);

/// Orthonormal pair spanning the plane perpendicular to unit vector u.
std::pair<Vec3, Vec3> orthonormal_frame(const Vec3& u);

}  // namespace blz
