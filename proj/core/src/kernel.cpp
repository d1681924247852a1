#include "blz/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blz {

void CrossSection::validate() const {
  if (!(gamma > -3.0) || !std::isfinite(gamma))
    throw std::invalid_argument("CrossSection: gamma must be > -3");
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("CrossSection: s must lie in (0,1)");
  if (!(K > 0.0) || !std::isfinite(K))
    throw std::invalid_argument("CrossSection: K must be positive");
  if (!(r_in > 0.0) || !(r_out > r_in))
    throw std::invalid_argument("CrossSection: need 0 < r_in < r_out");
  if (!(theta_min > 0.0) || !(theta_min < M_PI_2))
    throw std::invalid_argument("CrossSection: theta_min must lie in (0, pi/2)");
  if (theta_panels < 1 || nodes_per_panel < 1)
    throw std::invalid_argument("CrossSection: need at least one quadrature panel/node");
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

double angular_kernel(double cos_theta, const CrossSection& xs) {
  if (!(cos_theta < 1.0))
    throw std::domain_error("angular_kernel: theta = 0 is a non-integrable pole");
  if (cos_theta < 0.0)
    throw std::domain_error("angular_kernel: theta beyond pi/2 is outside the support");
  const double theta = std::acos(std::clamp(cos_theta, 0.0, 1.0));
  return xs.K * std::pow(theta, -(2.0 + 2.0 * xs.s));
}

double smooth_bridge(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double cutoff_phi(double r, const CrossSection& xs) {
  if (r < 0.0) throw std::domain_error("cutoff_phi: negative radius");
  return smooth_bridge((r - xs.r_in) / (xs.r_out - xs.r_in));
}

std::pair<double, double> kinetic_split(double r, const CrossSection& xs) {
  if (!(r > 0.0)) throw std::domain_error("kinetic_split: radius must be positive");
  const double rg = std::pow(r, xs.gamma);
  const double phi = cutoff_phi(r, xs);
  return {rg * phi, rg * (1.0 - phi)};
}

double regularized_r_gamma(double gamma, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("regularized_r_gamma: h must be positive");
  // Mean of r^gamma over the ball of radius h/2.
  return 3.0 * std::pow(0.5 * h, gamma) / (3.0 + gamma);
}

AngularRule make_angular_rule(const CrossSection& xs) {
  return make_angular_rule(xs, xs.theta_min, xs.theta_panels, xs.nodes_per_panel);
}

AngularRule make_angular_rule(const CrossSection& xs, double theta_min, int panels,
                              int nodes_per_panel) {
  if (!(theta_min > 0.0) || !(theta_min < M_PI_2))
    throw std::invalid_argument("make_angular_rule: theta_min must lie in (0, pi/2)");
  if (panels < 1 || nodes_per_panel < 1)
    throw std::invalid_argument("make_angular_rule: need at least one panel and node");
  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_panel, gx, gw);
  AngularRule rule;
  rule.theta_min = theta_min;
  // Log-spaced panels: the integrand concentrates at grazing angles.
  const double lmin = std::log(theta_min);
  const double lmax = std::log(M_PI_2);
  for (int p = 0; p < panels; ++p) {
    const double a = std::exp(lmin + (lmax - lmin) * p / panels);
    const double b = std::exp(lmin + (lmax - lmin) * (p + 1) / panels);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < nodes_per_panel; ++q) {
      const double theta = mid + half * gx[q];
      rule.theta.push_back(theta);
      rule.weight.push_back(2.0 * M_PI * std::sin(theta) * half * gw[q]);
      rule.b_value.push_back(angular_kernel(std::cos(theta), xs));
    }
  }
  return rule;
}

double radial_fourier(double xi_norm, double gamma, double r_max,
                      const std::function<double(double)>& profile) {
  if (!(r_max > 0.0)) throw std::invalid_argument("radial_fourier: r_max must be positive");
  if (xi_norm < 0.0) xi_norm = -xi_norm;
  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  auto integrand = [&](double r) {
    // r^2 * r^gamma * profile(r) * sinc(r xi)
    const double x = r * xi_norm;
    const double sinc = (x < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return std::pow(r, 2.0 + gamma) * profile(r) * sinc;
  };
  double acc = 0.0;
  // Near the origin the integrand behaves like r^{2+gamma} (integrable for
  // gamma > -3 but possibly steep): log-spaced panels on [a0, r_knee], with
  // the analytic leading-order piece below a0.
  const double a0 = 1e-8 * r_max;
  acc += std::pow(a0, 3.0 + gamma) / (3.0 + gamma) * profile(0.0);
  const double r_knee = 0.125 * r_max;
  const int n_log = 24;
  const double ll = std::log(a0), lh = std::log(r_knee);
  for (int p = 0; p < n_log; ++p) {
    const double a = std::exp(ll + (lh - ll) * p / n_log);
    const double b = std::exp(ll + (lh - ll) * (p + 1) / n_log);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t q = 0; q < gx.size(); ++q)
      acc += half * gw[q] * integrand(mid + half * gx[q]);
  }
  // Linear panels on [r_knee, r_max], enough to resolve the oscillation.
  const int n_lin = std::max(24, static_cast<int>(std::ceil(xi_norm * (r_max - r_knee) / 3.0)));
  for (int p = 0; p < n_lin; ++p) {
    const double a = r_knee + (r_max - r_knee) * p / n_lin;
    const double b = r_knee + (r_max - r_knee) * (p + 1) / n_lin;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t q = 0; q < gx.size(); ++q)
      acc += half * gw[q] * integrand(mid + half * gx[q]);
  }
  return 4.0 * M_PI * acc;
}

double phi_c_hat(double xi_norm, const CrossSection& xs) {
  return radial_fourier(xi_norm, xs.gamma, xs.r_out,
                        [&xs](double r) { return cutoff_phi(r, xs); });
}

RadialTable RadialTable::build(double gamma, double r_max, double xi_max, int n_entries,
                               const std::function<double(double)>& profile) {
  if (n_entries < 2 || !(xi_max > 0.0))
    throw std::invalid_argument("RadialTable: need xi_max > 0 and >= 2 entries");
  RadialTable t;
  t.xi_max_ = xi_max;
  t.values_.resize(n_entries);
  const double step = xi_max / (n_entries - 1);
  t.inv_step_ = 1.0 / step;
  for (int i = 0; i < n_entries; ++i)
    t.values_[i] = radial_fourier(i * step, gamma, r_max, profile);
  return t;
}

RadialTable build_phi_c_table(const CrossSection& xs, double xi_max, int n_entries) {
  return RadialTable::build(xs.gamma, xs.r_out, xi_max, n_entries,
                            [&xs](double r) { return cutoff_phi(r, xs); });
}

RadialTable build_phi_total_table(const CrossSection& xs, double r_taper, double r_cut,
                                  double xi_max, int n_entries) {
  if (!(r_taper >= xs.r_out) || !(r_cut > r_taper))
    throw std::invalid_argument("build_phi_total_table: need r_out <= r_taper < r_cut");
  auto profile = [&xs, r_taper, r_cut](double r) {
    const double phi = cutoff_phi(r, xs);
    const double taper = smooth_bridge((r - r_taper) / (r_cut - r_taper));
    return phi + (1.0 - phi) * taper;
  };
  return RadialTable::build(xs.gamma, r_cut, xi_max, n_entries, profile);
}

std::pair<Vec3, Vec3> collision_geometry(const Vec3& v, const Vec3& v_star,
                                         const Vec3& sigma) {
  if (std::abs(norm2(sigma) - 1.0) > 1e-12)
    throw std::invalid_argument("collision_geometry: sigma must be a unit vector");
  const Vec3 rel = {v[0] - v_star[0], v[1] - v_star[1], v[2] - v_star[2]};
  const double half_speed = 0.5 * std::sqrt(norm2(rel));
  Vec3 vp, vsp;
  for (int d = 0; d < 3; ++d) {
    const double center = 0.5 * (v[d] + v_star[d]);
    vp[d] = center + half_speed * sigma[d];
    vsp[d] = center - half_speed * sigma[d];
  }
  return {vp, vsp};
}

double jacobian_xi_plus(double theta) {
  if (theta < 0.0 || theta > M_PI_2)
    throw std::domain_error("jacobian_xi_plus: theta must lie in [0, pi/2]");
  const double c = std::cos(0.5 * theta);
  return 0.25 * c * c;
}

std::pair<Vec3, Vec3> orthonormal_frame(const Vec3& u) {
  if (std::abs(norm2(u) - 1.0) > 1e-10)
    throw std::invalid_argument("orthonormal_frame: input must be a unit vector");
  // Cross with the axis least aligned with u.
  Vec3 axis = {0.0, 0.0, 0.0};
  int least = 0;
  for (int d = 1; d < 3; ++d)
    if (std::abs(u[d]) < std::abs(u[least])) least = d;
  axis[least] = 1.0;
  Vec3 e1 = {u[1] * axis[2] - u[2] * axis[1], u[2] * axis[0] - u[0] * axis[2],
             u[0] * axis[1] - u[1] * axis[0]};
  const double inv = 1.0 / std::sqrt(norm2(e1));
  for (auto& x : e1) x *= inv;
  Vec3 e2 = {u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2],
             u[0] * e1[1] - u[1] * e1[0]};
  return {e1, e2};
}

}  // namespace blz
