#include "blz/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace blz {

namespace {

void check_finite(const Distribution& f, const char* where) {
  for (double x : f.values)
    if (!std::isfinite(x))
      throw NumericalFailure(std::string(where) + ": non-finite field value (blow-up?)");
}

Distribution axpy(const Distribution& x, double a, const Distribution& y) {
  Distribution out(x.grid);
  for (std::size_t i = 0; i < x.values.size(); ++i)
    out.values[i] = x.values[i] + a * y.values[i];
  return out;
}

double l2_pairing(const Distribution& a, const Distribution& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    acc += a.values[i] * b.values[i];
  return acc * std::pow(a.grid.spacing(), 3);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

// Collision-invariant moments (1, v, |v|^2) of a field, by midpoint sum.
std::array<double, 5> invariant_moments(const Distribution& f) {
  const auto& g = f.grid;
  const int n = g.n();
  std::array<double, 5> m{};
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        const double x = f.values[idx];
        const Vec3 v = g.velocity(i, j, k);
        m[0] += x;
        m[1] += x * v[0];
        m[2] += x * v[1];
        m[3] += x * v[2];
        m[4] += x * norm2(v);
      }
  const double h3 = std::pow(g.spacing(), 3);
  for (auto& x : m) x *= h3;
  return m;
}

// Subtract from `inc` the Gaussian-weighted polynomial field whose invariant
// moments equal those of `inc`, leaving an increment with (quadrature-exact)
// zero mass, momentum, and energy.  Returns the raw moments of `inc`.
std::array<double, 5> project_out_invariants(Distribution& inc, bool apply) {
  const auto m = invariant_moments(inc);
  if (!apply) return m;
  const auto& g = inc.grid;
  const int n = g.n();
  // Basis b_i = G(v) p_i(v), p = {1, v1, v2, v3, |v|^2}, G the unit Gaussian.
  // Gram system A alpha = m with A_{ji} = moments_j(b_i), assembled by the
  // same midpoint quadrature so the correction is exact at the lattice level.
  double A[5][5] = {};
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        const Vec3 v = g.velocity(i, j, k);
        const double r2 = norm2(v);
        const double G = std::exp(-0.5 * r2);
        const double p[5] = {G, G * v[0], G * v[1], G * v[2], G * r2};
        const double q[5] = {1.0, v[0], v[1], v[2], r2};
        for (int a = 0; a < 5; ++a)
          for (int b = 0; b < 5; ++b) A[a][b] += q[a] * p[b];
      }
  const double h3 = std::pow(g.spacing(), 3);
  for (auto& row : A)
    for (auto& x : row) x *= h3;
  // Gaussian elimination with partial pivoting on the 5x5 system.
  double alpha[5];
  {
    double M[5][6];
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) M[a][b] = A[a][b];
      M[a][5] = m[a];
    }
    for (int col = 0; col < 5; ++col) {
      int piv = col;
      for (int r = col + 1; r < 5; ++r)
        if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
      if (std::abs(M[piv][col]) < 1e-14)
        throw NumericalFailure("step: singular moment-projection system");
      if (piv != col)
        for (int b = 0; b < 6; ++b) std::swap(M[col][b], M[piv][b]);
      for (int r = 0; r < 5; ++r) {
        if (r == col) continue;
        const double fct = M[r][col] / M[col][col];
        for (int b = col; b < 6; ++b) M[r][b] -= fct * M[col][b];
      }
    }
    for (int a = 0; a < 5; ++a) alpha[a] = M[a][5] / M[a][a];
  }
  idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        const Vec3 v = g.velocity(i, j, k);
        const double r2 = norm2(v);
        const double G = std::exp(-0.5 * r2);
        inc.values[idx] -= G * (alpha[0] + alpha[1] * v[0] + alpha[2] * v[1] +
                                alpha[3] * v[2] + alpha[4] * r2);
      }
  return m;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "euler") return Scheme::Euler;
  if (name == "rk2") return Scheme::Rk2;
  if (name == "rk4") return Scheme::Rk4;
  throw std::invalid_argument("unknown time scheme: " + name);
}

StepResult step(const Distribution& f, double dt, Scheme scheme,
                const CollisionWorkspace& ws, const StepOptions& opt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("step: dt must be positive and finite");
  Distribution next(f.grid);
  switch (scheme) {
    case Scheme::Euler: {
      const Distribution k1 = apply_q(f, f, ws);
      next = axpy(f, dt, k1);
      break;
    }
    case Scheme::Rk2: {  // midpoint
      const Distribution k1 = apply_q(f, f, ws);
      const Distribution mid = axpy(f, 0.5 * dt, k1);
      const Distribution k2 = apply_q(mid, mid, ws);
      next = axpy(f, dt, k2);
      break;
    }
    case Scheme::Rk4: {
      const Distribution k1 = apply_q(f, f, ws);
      const Distribution y2 = axpy(f, 0.5 * dt, k1);
      const Distribution k2 = apply_q(y2, y2, ws);
      const Distribution y3 = axpy(f, 0.5 * dt, k2);
      const Distribution k3 = apply_q(y3, y3, ws);
      const Distribution y4 = axpy(f, dt, k3);
      const Distribution k4 = apply_q(y4, y4, ws);
      next = Distribution(f.grid);
      for (std::size_t i = 0; i < f.values.size(); ++i)
        next.values[i] = f.values[i] + dt / 6.0 *
                                           (k1.values[i] + 2.0 * k2.values[i] +
                                            2.0 * k3.values[i] + k4.values[i]);
      break;
    }
  }
  check_finite(next, "step");
  StepResult res;
  {
    Distribution inc(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      inc.values[i] = next.values[i] - f.values[i];
    const auto raw = project_out_invariants(inc, opt.conserve_moments);
    res.raw_mass_defect = raw[0];
    res.raw_momentum_defect = {raw[1], raw[2], raw[3]};
    res.raw_energy_defect = 0.5 * raw[4];
    if (opt.conserve_moments)
      for (std::size_t i = 0; i < f.values.size(); ++i)
        next.values[i] = f.values[i] + inc.values[i];
  }
  res.clipped_mass = 0.0;
  if (opt.clip_negative) {
    const double h3 = std::pow(f.grid.spacing(), 3);
    for (auto& x : next.values)
      if (x < 0.0) {
        res.clipped_mass -= x * h3;
        x = 0.0;
      }
    next.nonnegative = true;
  }
  res.f = std::move(next);
  return res;
}

Trajectory simulate(const Distribution& f0, double t_end, double dt, Scheme scheme,
                    int n_checkpoints, const CollisionWorkspace& ws,
                    const StepOptions& opt, bool record_dissipation) {
  if (!(t_end > 0.0) || n_checkpoints < 1)
    throw std::invalid_argument("simulate: need t_end > 0 and >= 1 checkpoint interval");
  check_finite(f0, "simulate");
  Trajectory traj;
  Distribution f = f0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(f);
    traj.moment_series.push_back(moments(f));
    if (record_dissipation)
      traj.dissipation_series.push_back(entropy_dissipation_checkpoint(f, ws));
  };
  record(0.0);
  const double chk_dt = t_end / n_checkpoints;
  double t = 0.0;
  for (int c = 1; c <= n_checkpoints; ++c) {
    const double target = c * chk_dt;
    while (t < target - 1e-12) {
      const double this_dt = std::min(dt, target - t);
      auto res = step(f, this_dt, scheme, ws, opt);
      f = std::move(res.f);
      traj.clipped_mass_total += res.clipped_mass;
      traj.max_raw_mass_defect =
          std::max(traj.max_raw_mass_defect, std::abs(res.raw_mass_defect));
      for (double p : res.raw_momentum_defect)
        traj.max_raw_momentum_defect =
            std::max(traj.max_raw_momentum_defect, std::abs(p));
      traj.max_raw_energy_defect =
          std::max(traj.max_raw_energy_defect, std::abs(res.raw_energy_defect));
      t += this_dt;
    }
    record(target);
  }
  return traj;
}

LedgerReport energy_ledger(const Trajectory& traj, const MollifierSchedule& sched,
                           const CollisionWorkspace& ws) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("energy_ledger: need at least two checkpoints");
  LedgerReport rep;
  const auto& grid = ws.grid();
  const int n = grid.n();
  const double l3 = std::pow(2.0 * grid.half_width(), 3);
  const double gamma = ws.xs().gamma;
  const double s = ws.xs().s;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const MollifierSymbol M = sched.symbol_at(t);
    const Spectrum F = forward_transform(traj.states[i]);
    double a_term = 0.0, log_term = 0.0;
    for (int ia = 0; ia < n; ++ia)
      for (int ib = 0; ib < n; ++ib)
        for (int ic = 0; ic < n; ++ic) {
          const Vec3 xi = grid.frequency(ia, ib, ic);
          const double m = M(xi);
          const double power = m * m * std::norm(F.coeff[grid.index(ia, ib, ic)]);
          a_term += power;
          log_term += 0.5 * std::log(1.0 + norm2(xi)) * power;
        }
    const Distribution mf = inverse_transform(apply_mollifier(F, M));
    const Distribution q_f_mf = apply_q(traj.states[i], mf, ws);
    const Distribution q_ff = apply_q(traj.states[i], traj.states[i], ws);
    const Distribution m_q_ff = apply_mollifier(q_ff, M);
    rep.times.push_back(t);
    rep.half_m_norm_sq.push_back(0.5 * a_term / l3);
    rep.log_term.push_back(log_term / l3);
    rep.q_pair_term.push_back(l2_pairing(q_f_mf, mf));
    rep.commutator_term.push_back(l2_pairing(axpy(m_q_ff, -1.0, q_f_mf), mf));
    const double coercive = norm(mf, NormRequest::sobolev(s, 0.5 * gamma));
    rep.coercive_term.push_back(coercive * coercive);
  }
  rep.lhs = rep.half_m_norm_sq.back() - rep.half_m_norm_sq.front();
  rep.rhs = sched.N * trapezoid(rep.times, rep.log_term) +
            trapezoid(rep.times, rep.q_pair_term) +
            trapezoid(rep.times, rep.commutator_term);
  rep.residual = std::abs(rep.lhs - rep.rhs);
  double scale = std::abs(rep.lhs);
  scale = std::max(scale, std::abs(sched.N * trapezoid(rep.times, rep.log_term)));
  scale = std::max(scale, std::abs(trapezoid(rep.times, rep.q_pair_term)));
  scale = std::max(scale, std::abs(trapezoid(rep.times, rep.commutator_term)));
  rep.residual_rel = scale > 0.0 ? rep.residual / scale : rep.residual;
  return rep;
}

double shell_decay_exponent(const Distribution& f, double xi_lo, double xi_hi) {
  const auto& grid = f.grid;
  const int n = grid.n();
  const double dxi = grid.freq_spacing();
  const Spectrum F = forward_transform(f);
  const int max_shell = n / 2 - 1;
  std::vector<double> sum(max_shell + 1, 0.0);
  std::vector<int> cnt(max_shell + 1, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int m1 = a - n / 2, m2 = b - n / 2, m3 = c - n / 2;
        const double rm = std::sqrt(double(m1) * m1 + double(m2) * m2 + double(m3) * m3);
        const int shell = static_cast<int>(std::lround(rm));
        if (shell < 1 || shell > max_shell) continue;
        sum[shell] += std::abs(F.coeff[grid.index(a, b, c)]);
        ++cnt[shell];
      }
  if (xi_hi <= 0.0) {
    xi_hi = max_shell * dxi;
    xi_lo = 0.5 * xi_hi;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int shell = 1; shell <= max_shell; ++shell) {
    const double xi = shell * dxi;
    if (xi < xi_lo || xi > xi_hi || cnt[shell] == 0) continue;
    const double avg = std::max(sum[shell] / cnt[shell], 1e-300);
    const double x = std::log(xi), y = std::log(avg);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("shell_decay_exponent: band holds < 2 shells");
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

TrackerReport regularity_tracker(const Trajectory& traj, const MollifierSchedule& sched,
                                 const std::vector<std::pair<double, double>>& orders,
                                 const std::vector<double>& deltas) {
  TrackerReport rep;
  rep.deltas = deltas;
  rep.orders = orders;
  const auto& grid = traj.states.front().grid;
  const int n = grid.n();
  const double l3 = std::pow(2.0 * grid.half_width(), 3);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    TrackerRow row;
    row.t = traj.times[i];
    const Spectrum F = forward_transform(traj.states[i]);
    for (double d : deltas) {
      MollifierSymbol M;
      M.lambda = sched.lambda_at(row.t);
      M.delta = d;
      M.n0 = sched.n0;
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            const double m = M(grid.frequency(a, b, c));
            acc += m * m * std::norm(F.coeff[grid.index(a, b, c)]);
          }
      row.m_norm.push_back(std::sqrt(acc / l3));
    }
    for (const auto& [k, ell] : orders)
      row.sobolev.push_back(norm(traj.states[i], NormRequest::sobolev(k, ell)));
    row.tail_exponent = shell_decay_exponent(traj.states[i]);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace blz
