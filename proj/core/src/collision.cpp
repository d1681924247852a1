#include "blz/collision.hpp"

#include <cmath>
#include <complex>
#include <memory>

namespace blz {

namespace {

using cplx = std::complex<double>;

void require_same_grid(const VelocityGrid& a, const VelocityGrid& b,
                       const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

struct AzimuthTable {
  std::vector<double> cos_phi, sin_phi;
  explicit AzimuthTable(int n) : cos_phi(n), sin_phi(n) {
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * M_PI * j / n;
      cos_phi[j] = std::cos(phi);
      sin_phi[j] = std::sin(phi);
    }
  }
};

// sigma-node visitor shared by the frequency-side assemblers: calls
// visit(wb, xi_minus) for every node of the rule around the axis xi.
template <class Visit>
void for_each_sigma(const CollisionWorkspace& ws, const AzimuthTable& az,
                    const Vec3& xi, double xi_norm, Visit&& visit) {
  const auto& rule = ws.rule();
  const int naz = static_cast<int>(az.cos_phi.size());
  const Vec3 u = {xi[0] / xi_norm, xi[1] / xi_norm, xi[2] / xi_norm};
  const auto [e1, e2] = orthonormal_frame(u);
  for (std::size_t k = 0; k < rule.theta.size(); ++k) {
    const double ct = std::cos(rule.theta[k]);
    const double st = std::sin(rule.theta[k]);
    const double wb = rule.weight[k] * rule.b_value[k] / naz;
    for (int j = 0; j < naz; ++j) {
      // xi^- = (|xi|/2) [(1 - cos t) u - sin t (cos p e1 + sin p e2)]
      Vec3 xim;
      for (int d = 0; d < 3; ++d)
        xim[d] = 0.5 * xi_norm *
                 ((1.0 - ct) * u[d] -
                  st * (az.cos_phi[j] * e1[d] + az.sin_phi[j] * e2[d]));
      visit(wb, xim);
    }
  }
}

}  // namespace

CollisionWorkspace::CollisionWorkspace(const VelocityGrid& grid, const CrossSection& xs,
                                       const WorkspaceOptions& opt)
    : grid_(grid), xs_(xs), opt_(opt) {
  xs_.validate();
  if (opt_.azimuth_nodes < 1)
    throw std::invalid_argument("CollisionWorkspace: need at least one azimuth node");
  const int panels = opt_.theta_panels > 0 ? opt_.theta_panels : xs_.theta_panels;
  const int nodes = opt_.nodes_per_panel > 0 ? opt_.nodes_per_panel : xs_.nodes_per_panel;
  rule_ = make_angular_rule(xs_, xs_.theta_min, panels, nodes);
  r_gamma_origin_ = regularized_r_gamma(xs_.gamma, grid_.spacing());

  const int n = grid_.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        FreqNode node;
        node.a = a; node.b = b; node.c = c;
        node.m1 = a - n / 2; node.m2 = b - n / 2; node.m3 = c - n / 2;
        node.xi = grid_.frequency(a, b, c);
        node.xi_norm = std::sqrt(norm2(node.xi));
        node.idx = grid_.index(a, b, c);
        if (opt_.xi_max > 0.0 && node.xi_norm > opt_.xi_max) continue;
        ball_.push_back(node);
      }

  // Nonzero lattice samples of the compact factor; the origin is dropped
  // because its gain and loss contributions cancel exactly.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Vec3 z = grid_.velocity(a, b, c);
        const double r = std::sqrt(norm2(z));
        if (r == 0.0 || r >= xs_.r_out) continue;
        const double w = std::pow(r, xs_.gamma) * cutoff_phi(r, xs_);
        if (w != 0.0) z_compact_.push_back({z, w});
      }

  double max_norm = 0.0;
  for (const auto& nd : ball_) max_norm = std::max(max_norm, nd.xi_norm);
  const double table_max = 2.0 * max_norm + 1.0;
  const double L = grid_.half_width();
  // The tapered factor must stay supported inside the fundamental box; the
  // frequency lattice cannot resolve the transform of anything wider.
  double taper = opt_.tail_taper > 0.0 ? opt_.tail_taper : 0.5 * L;
  taper = std::max(taper, xs_.r_out + 1e-9);
  double cut = opt_.tail_cut > 0.0 ? opt_.tail_cut : 0.95 * L;
  cut = std::max(cut, taper + std::max(0.05 * L, 0.25));
  taper_ = taper;
  cut_ = cut;
  phi_c_ = build_phi_c_table(xs_, table_max, opt_.table_entries);
  phi_total_ = build_phi_total_table(xs_, taper_, cut_, table_max, opt_.table_entries);
}

double CollisionWorkspace::phi_velocity(double r, KineticPart part) const {
  const double rg = r > 0.0 ? std::pow(r, xs_.gamma) : r_gamma_origin_;
  const double phi = cutoff_phi(r, xs_);
  double full = rg;
  if (!maxwell())  // gamma = 0 keeps the exact constant factor untapered
    full = rg * (phi + (1.0 - phi) * smooth_bridge((r - taper_) / (cut_ - taper_)));
  switch (part) {
    case KineticPart::Full: return full;
    case KineticPart::Compact: return rg * phi;
    case KineticPart::Tail: return full - rg * phi;
  }
  return 0.0;
}

double CollisionWorkspace::compact_hat(const Vec3& eta) const {
  double acc = 0.0;
  for (const auto& zs : z_compact_) acc += zs.w * std::cos(dot(zs.z, eta));
  const double h = grid_.spacing();
  return acc * h * h * h;
}

const std::vector<cplx>& CollisionWorkspace::compact_angular_table() const {
  if (!k_table_.empty() || z_compact_.empty() || ball_.empty()) return k_table_;
  const std::size_t nz = z_compact_.size();
  check_budget(ball_.size() * nz,
               rule_.theta.size() * static_cast<std::size_t>(opt_.azimuth_nodes));
  const AzimuthTable az(opt_.azimuth_nodes);
  const double h = grid_.spacing();
  // Integer offsets of the compact samples, for per-axis phase recurrences.
  int mr = 0;
  std::vector<std::array<int, 3>> zm(nz);
  for (std::size_t q = 0; q < nz; ++q)
    for (int d = 0; d < 3; ++d) {
      zm[q][d] = static_cast<int>(std::lround(z_compact_[q].z[d] / h));
      mr = std::max(mr, std::abs(zm[q][d]));
    }
  std::vector<cplx> phase(3 * (2 * mr + 1));
  auto ph = [&](int d, int m) -> cplx& { return phase[d * (2 * mr + 1) + m + mr]; };

  k_table_.assign(ball_.size() * nz, cplx(0.0, 0.0));
  for (std::size_t p = 0; p < ball_.size(); ++p) {
    const auto& node = ball_[p];
    if (node.xi_norm == 0.0) continue;  // exact mass-mode annihilation
    cplx* row = k_table_.data() + p * nz;
    for_each_sigma(*this, az, node.xi, node.xi_norm, [&](double wb, const Vec3& xim) {
      for (int d = 0; d < 3; ++d) {
        const cplx step = std::polar(1.0, h * xim[d]);
        ph(d, 0) = 1.0;
        for (int m = 1; m <= mr; ++m) {
          ph(d, m) = ph(d, m - 1) * step;
          ph(d, -m) = std::conj(ph(d, m));
        }
      }
      for (std::size_t q = 0; q < nz; ++q) {
        const cplx e = ph(0, zm[q][0]) * ph(1, zm[q][1]) * ph(2, zm[q][2]);
        row[q] += wb * (e - 1.0);
      }
    });
  }
  return k_table_;
}

void CollisionWorkspace::check_budget(std::size_t outer, std::size_t inner) const {
  const double total = static_cast<double>(outer) * static_cast<double>(inner);
  if (total > opt_.budget_cap)
    throw BudgetExceeded("collision evaluation exceeds configured budget cap: " +
                         std::to_string(total) + " > " +
                         std::to_string(opt_.budget_cap));
}

double angular_mass(const CollisionWorkspace& ws) {
  const auto& rule = ws.rule();
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.theta.size(); ++k)
    acc += rule.weight[k] * rule.b_value[k];
  return acc;
}

// ---------------------------------------------------------------------------
// Velocity-side direct quadratures.
//
// Accum is called as accum(i_v, i_vstar, r, v_prime, v_star_prime, W) with
// W = w_sigma * b / n_az; the h^6 factor is applied by the caller.
// ---------------------------------------------------------------------------
namespace {

template <class Accum>
void pair_sigma_sum(const CollisionWorkspace& ws, Accum&& accum) {
  const auto& g = ws.grid();
  const int n = g.n();
  const auto& rule = ws.rule();
  const int naz = ws.options().azimuth_nodes;
  const AzimuthTable az(naz);
  const std::size_t nv = g.size();
  ws.check_budget(nv * nv, rule.theta.size() * naz);

  std::vector<Vec3> vel(nv);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) vel[idx] = g.velocity(i, j, k);

  const std::size_t n_theta = rule.theta.size();
  std::vector<double> cos_t(n_theta), sin_t(n_theta), wb(n_theta);
  for (std::size_t k = 0; k < n_theta; ++k) {
    cos_t[k] = std::cos(rule.theta[k]);
    sin_t[k] = std::sin(rule.theta[k]);
    wb[k] = rule.weight[k] * rule.b_value[k] / naz;
  }

  for (std::size_t iv = 0; iv < nv; ++iv) {
    const Vec3 v = vel[iv];
    for (std::size_t is = 0; is < nv; ++is) {
      if (is == iv) continue;  // v' = v = v_*: every bracket vanishes
      const Vec3 vs = vel[is];
      const Vec3 rel = {v[0] - vs[0], v[1] - vs[1], v[2] - vs[2]};
      const double r = std::sqrt(norm2(rel));
      const Vec3 u = {rel[0] / r, rel[1] / r, rel[2] / r};
      const auto [e1, e2] = orthonormal_frame(u);
      const Vec3 mid = {0.5 * (v[0] + vs[0]), 0.5 * (v[1] + vs[1]),
                        0.5 * (v[2] + vs[2])};
      const double half_r = 0.5 * r;
      for (std::size_t k = 0; k < n_theta; ++k) {
        const double ct = cos_t[k], st = sin_t[k];
        for (int j = 0; j < naz; ++j) {
          Vec3 sigma, vp, vsp;
          for (int d = 0; d < 3; ++d) {
            sigma[d] = ct * u[d] + st * (az.cos_phi[j] * e1[d] + az.sin_phi[j] * e2[d]);
            vp[d] = mid[d] + half_r * sigma[d];
            vsp[d] = mid[d] - half_r * sigma[d];
          }
          accum(iv, is, r, vp, vsp, wb[k]);
        }
      }
    }
  }
}

}  // namespace

double weak_form_pairing(const Distribution& g, const Distribution& f,
                         const Distribution& psi, const CollisionWorkspace& ws,
                         KineticPart part) {
  require_same_grid(g.grid, ws.grid(), "weak_form_pairing");
  require_same_grid(f.grid, ws.grid(), "weak_form_pairing");
  require_same_grid(psi.grid, ws.grid(), "weak_form_pairing");
  const TrigInterpolant psi_i(psi);
  double acc = 0.0;
  pair_sigma_sum(ws, [&](std::size_t iv, std::size_t is, double r, const Vec3& vp,
                         const Vec3& vsp, double w) {
    const double gf = g.values[is] * f.values[iv];
    if (gf == 0.0) return;
    const double bracket = psi_i(vp) + psi_i(vsp) - psi.values[iv] - psi.values[is];
    acc += w * ws.phi_velocity(r, part) * gf * bracket;
  });
  const double h = ws.grid().spacing();
  return 0.5 * acc * h * h * h * h * h * h;
}

double one_sided_pairing(const Distribution& g, const Distribution& f,
                         const Distribution& phi, const CollisionWorkspace& ws,
                         KineticPart part) {
  require_same_grid(g.grid, ws.grid(), "one_sided_pairing");
  require_same_grid(f.grid, ws.grid(), "one_sided_pairing");
  require_same_grid(phi.grid, ws.grid(), "one_sided_pairing");
  const TrigInterpolant phi_i(phi);
  double acc = 0.0;
  pair_sigma_sum(ws, [&](std::size_t iv, std::size_t is, double r, const Vec3& vp,
                         const Vec3&, double w) {
    const double gf = g.values[is] * f.values[iv];
    if (gf == 0.0) return;
    acc += w * ws.phi_velocity(r, part) * gf * (phi_i(vp) - phi.values[iv]);
  });
  const double h = ws.grid().spacing();
  return acc * h * h * h * h * h * h;
}

double cancellation_integral(const Distribution& g, const Distribution& F,
                             const CollisionWorkspace& ws, KineticPart part) {
  require_same_grid(g.grid, ws.grid(), "cancellation_integral");
  require_same_grid(F.grid, ws.grid(), "cancellation_integral");
  const TrigInterpolant F_i(F);
  double acc = 0.0;
  pair_sigma_sum(ws, [&](std::size_t iv, std::size_t is, double r, const Vec3& vp,
                         const Vec3&, double w) {
    const double gs = g.values[is];
    if (gs == 0.0) return;
    acc += w * ws.phi_velocity(r, part) * gs * (F_i(vp) - F.values[iv]);
  });
  const double h = ws.grid().spacing();
  return acc * h * h * h * h * h * h;
}

CoercivePairing coercive_pairing(const Distribution& g, const Distribution& f,
                                 const CollisionWorkspace& ws, KineticPart part) {
  require_same_grid(g.grid, ws.grid(), "coercive_pairing");
  require_same_grid(f.grid, ws.grid(), "coercive_pairing");
  for (double x : g.values)
    if (x < 0.0)
      throw std::invalid_argument("coercive_pairing: g must be nonnegative");
  const TrigInterpolant f_i(f);
  double acc_pair = 0.0, acc_cg = 0.0, acc_cancel = 0.0;
  pair_sigma_sum(ws, [&](std::size_t iv, std::size_t is, double r, const Vec3& vp,
                         const Vec3&, double w) {
    const double gs = g.values[is];
    if (gs == 0.0) return;
    const double wphi = w * ws.phi_velocity(r, part) * gs;
    const double fv = f.values[iv];
    const double fp = f_i(vp);
    const double d = fp - fv;
    acc_pair += wphi * fv * d;
    acc_cg += wphi * d * d;
    acc_cancel += wphi * (fp * fp - fv * fv);
  });
  const double h = ws.grid().spacing();
  const double h6 = h * h * h * h * h * h;
  CoercivePairing out;
  out.pairing = -acc_pair * h6;
  out.c_gamma = acc_cg * h6;
  out.cancellation = acc_cancel * h6;
  return out;
}

Distribution loss_term(const Distribution& g, const Distribution& f,
                       const CollisionWorkspace& ws) {
  require_same_grid(g.grid, ws.grid(), "loss_term");
  require_same_grid(f.grid, ws.grid(), "loss_term");
  const auto& grid = ws.grid();
  const int n = grid.n();
  const double a_mass = angular_mass(ws);
  const double h3 = std::pow(grid.spacing(), 3);
  Distribution out(grid);
  std::size_t iv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++iv) {
        const Vec3 v = grid.velocity(i, j, k);
        double conv = 0.0;
        std::size_t is = 0;
        for (int i2 = 0; i2 < n; ++i2)
          for (int j2 = 0; j2 < n; ++j2)
            for (int k2 = 0; k2 < n; ++k2, ++is) {
              const double gs = g.values[is];
              if (gs == 0.0) continue;
              const Vec3 vs = grid.velocity(i2, j2, k2);
              const Vec3 rel = {v[0] - vs[0], v[1] - vs[1], v[2] - vs[2]};
              conv += ws.phi_velocity(std::sqrt(norm2(rel)), KineticPart::Full) * gs;
            }
        out.values[iv] = a_mass * f.values[iv] * conv * h3;
      }
  return out;
}

// ---------------------------------------------------------------------------
// Frequency-side machinery.
//
// All sums use periodic wavenumber arithmetic and lattice transforms of the
// kinetic factor, so that (up to the shared sigma rule) they evaluate exactly
// the same object as the velocity-side pair quadratures above.
// ---------------------------------------------------------------------------
namespace {

// Semi-discrete transform table: \hat f_s(mu) = h^3 sum_v f(v) e^{-i v.mu}
// sampled on a refined frequency lattice (it is (2 pi / h)-periodic), read
// off by periodic 6-point tensor-Lagrange interpolation.
class SemiDiscreteTable {
 public:
  SemiDiscreteTable(const Distribution& f, int refine) {
    const int n = f.grid.n();
    refine_ = refine > 0 ? refine : auto_refine_factor(n);
    fine_n_ = n * refine_;
    const VelocityGrid wide = make_grid(fine_n_, f.grid.half_width() * refine_);
    // Same velocity spacing; f extended by zero outside its box.
    std::vector<cplx> padded(wide.size(), cplx(0.0, 0.0));
    const int off = (fine_n_ - n) / 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          padded[wide.index(i + off, j + off, k + off)] =
              f.values[f.grid.index(i, j, k)];
    tab_ = forward_transform_complex(wide, padded);
    freq0_ = wide.axis_frequency(0);
    inv_delta_ = 1.0 / wide.freq_spacing();
  }

  cplx operator()(const Vec3& mu) const {
    const int n = fine_n_;
    int ix[6], iy[6], iz[6];
    int* i3[3] = {ix, iy, iz};
    double wx[6], wy[6], wz[6];
    double* w3[3] = {wx, wy, wz};
    for (int d = 0; d < 3; ++d) {
      const double x = (mu[d] - freq0_) * inv_delta_;
      const double fl = std::floor(x);
      lagrange6_weights(x - fl, w3[d]);
      long long b = (static_cast<long long>(fl) - 2) % n;
      if (b < 0) b += n;
      for (int t = 0; t < 6; ++t) i3[d][t] = static_cast<int>((b + t) % n);
    }
    cplx acc = 0.0;
    for (int di = 0; di < 6; ++di) {
      const std::size_t row_i = static_cast<std::size_t>(ix[di]) * n;
      for (int dj = 0; dj < 6; ++dj) {
        const std::size_t row_ij = (row_i + iy[dj]) * n;
        const double wij = wx[di] * wy[dj];
        cplx inner = 0.0;
        for (int dk = 0; dk < 6; ++dk) inner += wz[dk] * tab_[row_ij + iz[dk]];
        acc += wij * inner;
      }
    }
    return acc;
  }

 private:
  int fine_n_ = 0, refine_ = 1;
  double freq0_ = 0.0, inv_delta_ = 0.0;
  std::vector<cplx> tab_;
};

// Compact-part spectrum of Q: S(xi) = h^3 sum_z Phi_c(z) K_z(xi) P_z-hat(xi)
// with P_z(v) = star(v - z) * other(v) and K_z the cached angular sums.
std::vector<cplx> compact_q_hat(const Spectrum& star, const Spectrum& other,
                                const CollisionWorkspace& ws) {
  const auto& grid = ws.grid();
  const int n = grid.n();
  const auto& ball = ws.ball();
  const auto& zs = ws.compact_samples();
  const auto& ktab = ws.compact_angular_table();
  const Distribution star_v = inverse_transform(star);
  const Distribution other_v = inverse_transform(other);
  const double h3 = std::pow(grid.spacing(), 3);

  std::vector<cplx> out(grid.size(), cplx(0.0, 0.0));
  std::vector<cplx> prod(grid.size());
  for (std::size_t q = 0; q < zs.size(); ++q) {
    const double h = grid.spacing();
    const int m1 = static_cast<int>(std::lround(zs[q].z[0] / h));
    const int m2 = static_cast<int>(std::lround(zs[q].z[1] / h));
    const int m3 = static_cast<int>(std::lround(zs[q].z[2] / h));
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const int is = (i - m1 % n + n) % n;
      for (int j = 0; j < n; ++j) {
        const int js = (j - m2 % n + n) % n;
        for (int k = 0; k < n; ++k, ++idx) {
          const int ks = (k - m3 % n + n) % n;
          prod[idx] = star_v.values[grid.index(is, js, ks)] * other_v.values[idx];
        }
      }
    }
    const auto p_hat = forward_transform_complex(grid, prod);
    const double wz = h3 * zs[q].w;
    for (std::size_t p = 0; p < ball.size(); ++p)
      out[ball[p].idx] += wz * ktab[p * zs.size() + q] * p_hat[ball[p].idx];
  }
  return out;
}

// gamma = 0 full-factor spectrum of Q via the Dirichlet-comb closed form:
// Q-hat(xi) = sum_sigma w b [ other_s(xi - xi^-) star_s(xi^-) ]
//             - (angular mass) star(0) other(xi).
std::vector<cplx> maxwell_q_hat(const Spectrum& star, const Spectrum& other,
                                const CollisionWorkspace& ws) {
  const auto& grid = ws.grid();
  const auto& ball = ws.ball();
  const AzimuthTable az(ws.options().azimuth_nodes);
  const Distribution star_v = inverse_transform(star);
  const Distribution other_v = inverse_transform(other);
  const int refine = ws.options().table_refine;
  const SemiDiscreteTable star_t(star_v, refine);
  const bool same = star.coeff == other.coeff;
  std::unique_ptr<SemiDiscreteTable> other_owned;
  if (!same) other_owned = std::make_unique<SemiDiscreteTable>(other_v, refine);
  const SemiDiscreteTable& other_t = same ? star_t : *other_owned;
  const double a_mass = angular_mass(ws);
  const cplx star0 = star.coeff[grid.index(grid.n() / 2, grid.n() / 2, grid.n() / 2)];

  std::vector<cplx> out(grid.size(), cplx(0.0, 0.0));
  for (const auto& node : ball) {
    if (node.xi_norm == 0.0) continue;  // exact mass-mode annihilation
    cplx gain = 0.0;
    for_each_sigma(ws, az, node.xi, node.xi_norm, [&](double wb, const Vec3& xim) {
      const Vec3 rest = {node.xi[0] - xim[0], node.xi[1] - xim[1],
                         node.xi[2] - xim[2]};
      gain += wb * other_t(rest) * star_t(xim);
    });
    out[node.idx] = gain - a_mass * star0 * other.coeff[node.idx];
  }
  return out;
}

// Direct per-mode double sum with periodic wavenumber arithmetic, used for
// the smooth-tail factor at gamma != 0 where no lattice-exact route is
// affordable; the kernel is read from the continuum radial table.
std::vector<cplx> tail_q_hat_direct(const Spectrum& star, const Spectrum& other,
                                    const CollisionWorkspace& ws) {
  const auto& grid = ws.grid();
  const int n = grid.n();
  const int half = n / 2;
  const auto& ball = ws.ball();
  ws.check_budget(ball.size() * ball.size(),
                  ws.rule().theta.size() *
                      static_cast<std::size_t>(ws.options().azimuth_nodes));
  const AzimuthTable az(ws.options().azimuth_nodes);

  std::vector<cplx> star_ball(ball.size());
  std::vector<double> loss_ball(ball.size());
  for (std::size_t p = 0; p < ball.size(); ++p) {
    star_ball[p] = star.coeff[ball[p].idx];
    loss_ball[p] = ws.phi_hat(ball[p].xi_norm, KineticPart::Tail);
  }

  std::vector<cplx> out(grid.size(), cplx(0.0, 0.0));
  for (const auto& node : ball) {
    if (node.xi_norm == 0.0) continue;
    cplx acc = 0.0;
    for_each_sigma(ws, az, node.xi, node.xi_norm, [&](double wb, const Vec3& xim) {
      cplx inner = 0.0;
      for (std::size_t p = 0; p < ball.size(); ++p) {
        const auto& st = ball[p];
        const auto gs = star_ball[p];
        if (gs.real() == 0.0 && gs.imag() == 0.0) continue;
        const int a = (node.m1 - st.m1 + half % n + 16 * n) % n;
        const int b = (node.m2 - st.m2 + half % n + 16 * n) % n;
        const int c = (node.m3 - st.m3 + half % n + 16 * n) % n;
        const auto fv = other.coeff[(static_cast<std::size_t>(a) * n + b) * n + c];
        if (fv.real() == 0.0 && fv.imag() == 0.0) continue;
        const double dx = st.xi[0] - xim[0];
        const double dy = st.xi[1] - xim[1];
        const double dz = st.xi[2] - xim[2];
        const double shifted = std::sqrt(dx * dx + dy * dy + dz * dz);
        inner += (ws.phi_hat(shifted, KineticPart::Tail) - loss_ball[p]) * gs * fv;
      }
      acc += wb * inner;
    });
    const double l3 = 2.0 * grid.half_width();
    out[node.idx] = acc / (l3 * l3 * l3);
  }
  return out;
}

// Part dispatch for the assembled spectrum of Q (no output normalization
// beyond the conventions stated on each route).
std::vector<cplx> q_hat_parts(const Spectrum& star, const Spectrum& other,
                              const CollisionWorkspace& ws, KineticPart part) {
  auto add = [](std::vector<cplx>& a, const std::vector<cplx>& b, double s) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  };
  switch (part) {
    case KineticPart::Compact:
      return compact_q_hat(star, other, ws);
    case KineticPart::Full: {
      if (ws.maxwell()) return maxwell_q_hat(star, other, ws);
      auto out = compact_q_hat(star, other, ws);
      add(out, tail_q_hat_direct(star, other, ws), 1.0);
      return out;
    }
    case KineticPart::Tail: {
      if (!ws.maxwell()) return tail_q_hat_direct(star, other, ws);
      auto out = maxwell_q_hat(star, other, ws);
      add(out, compact_q_hat(star, other, ws), -1.0);
      return out;
    }
  }
  return {};
}

bool is_hermitian(const Spectrum& F) {
  const int n = F.grid.n();
  for (int a = 0; a < n; ++a) {
    const int am = n - a;  // physical mirror index of wavenumber -(a - n/2)
    if (am >= n) continue;
    for (int b = 0; b < n; ++b) {
      const int bm = n - b;
      if (bm >= n) continue;
      for (int c = 0; c < n; ++c) {
        const int cm = n - c;
        if (cm >= n) continue;
        const auto z = F.coeff[F.grid.index(a, b, c)];
        const auto zm = F.coeff[F.grid.index(am, bm, cm)];
        if (std::abs(z - std::conj(zm)) > 1e-9 * (1.0 + std::abs(z))) return false;
      }
    }
  }
  return true;
}

// Pair each mode with its mirror: the azimuth discretization is the only
// source of asymmetry, and averaging restores an exactly real inverse image.
void hermitian_symmetrize(std::vector<cplx>& s, const VelocityGrid& grid) {
  const int n = grid.n();
  for (int a = 1; a < n; ++a) {
    const int am = n - a;
    for (int b = 1; b < n; ++b) {
      const int bm = n - b;
      for (int c = 1; c < n; ++c) {
        const int cm = n - c;
        const std::size_t i = grid.index(a, b, c);
        const std::size_t j = grid.index(am, bm, cm);
        if (j < i) continue;
        const cplx mean = 0.5 * (s[i] + std::conj(s[j]));
        s[i] = mean;
        s[j] = std::conj(mean);
      }
    }
  }
}

}  // namespace

double trilinear_qc(const Spectrum& f_star, const Spectrum& g, const Spectrum& h,
                    const CollisionWorkspace& ws, KineticPart part) {
  require_same_grid(f_star.grid, ws.grid(), "trilinear_qc");
  require_same_grid(g.grid, ws.grid(), "trilinear_qc");
  require_same_grid(h.grid, ws.grid(), "trilinear_qc");
  const auto s = q_hat_parts(f_star, g, ws, part);
  cplx acc = 0.0;
  for (const auto& node : ws.ball())
    acc += s[node.idx] * std::conj(h.coeff[node.idx]);
  const double l3 = 2.0 * ws.grid().half_width();
  return acc.real() / (l3 * l3 * l3);
}

Spectrum apply_q_hat(const Spectrum& g_star, const Spectrum& f,
                     const CollisionWorkspace& ws, KineticPart part) {
  require_same_grid(g_star.grid, ws.grid(), "apply_q_hat");
  require_same_grid(f.grid, ws.grid(), "apply_q_hat");
  auto s = q_hat_parts(g_star, f, ws, part);
  if (is_hermitian(g_star) && is_hermitian(f)) hermitian_symmetrize(s, ws.grid());
  Spectrum out(ws.grid());
  out.coeff = std::move(s);
  zero_nyquist(out);
  return out;
}

Distribution apply_q(const Distribution& g, const Distribution& f,
                     const CollisionWorkspace& ws, KineticPart part) {
  return inverse_transform(
      apply_q_hat(forward_transform(g), forward_transform(f), ws, part));
}

double commutator_pairing(const Distribution& f, const Distribution& g,
                          const Distribution& h, const MollifierSymbol& M,
                          const CollisionWorkspace& ws, KineticPart part) {
  require_same_grid(f.grid, ws.grid(), "commutator_pairing");
  require_same_grid(g.grid, ws.grid(), "commutator_pairing");
  require_same_grid(h.grid, ws.grid(), "commutator_pairing");
  M.validate();
  const Spectrum F = forward_transform(f);
  Spectrum G = forward_transform(g);
  const Spectrum H = forward_transform(h);

  // (M Q(f,g) - Q(f, M g), h): the inserted-factor trilinear sum splits
  // exactly into these two assemblies by linearity in the g slot.
  const auto s_plain = q_hat_parts(F, G, ws, part);
  for (const auto& node : ws.ball())
    G.coeff[node.idx] *= M(node.xi);
  const auto s_mollified = q_hat_parts(F, G, ws, part);

  cplx acc = 0.0;
  for (const auto& node : ws.ball())
    acc += (M(node.xi) * s_plain[node.idx] - s_mollified[node.idx]) *
           std::conj(H.coeff[node.idx]);
  const double l3 = 2.0 * ws.grid().half_width();
  return acc.real() / (l3 * l3 * l3);
}

}  // namespace blz
