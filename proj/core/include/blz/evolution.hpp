#pragma once

#include <string>
#include <vector>

#include "blz/collision.hpp"
#include "blz/functionals.hpp"
#include "blz/mollifier.hpp"

namespace blz {

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme { Euler, Rk2, Rk4 };

Scheme parse_scheme(const std::string& name);

struct StepOptions {
  bool clip_negative = false;  // clip-to-zero, clipped mass reported, no renorm
  // Remove the (quadrature-level) mass/momentum/energy residual of each step's
  // increment by subtracting its component along a Gaussian-weighted
  // polynomial basis {G, v G, |v|^2 G}.  The raw residuals are reported in
  // StepResult before correction; the projection changes the increment only
  // at the size of those residuals.
  bool conserve_moments = true;
};

struct StepResult {
  Distribution f;
  double clipped_mass = 0.0;
  // Mass/momentum/energy moments of the uncorrected increment (the step's raw
  // conservation defect), whether or not the projection is enabled.
  double raw_mass_defect = 0.0;
  Vec3 raw_momentum_defect = {0.0, 0.0, 0.0};
  double raw_energy_defect = 0.0;
};

StepResult step(const Distribution& f, double dt, Scheme scheme,
                const CollisionWorkspace& ws, const StepOptions& opt = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<Distribution> states;
  std::vector<Moments> moment_series;      // per checkpoint
  std::vector<double> dissipation_series;  // D(f,f), sign-safe checkpoint route
  double clipped_mass_total = 0.0;
  // Largest per-step raw conservation defects seen over the run.
  double max_raw_mass_defect = 0.0;
  double max_raw_momentum_defect = 0.0;
  double max_raw_energy_defect = 0.0;
  std::string provenance;
};

/// Explicit integration of f_t = Q(f,f) with evenly spaced checkpoints
/// (n_checkpoints intervals; checkpoint 0 is the initial datum).
Trajectory simulate(const Distribution& f0, double t_end, double dt, Scheme scheme,
                    int n_checkpoints, const CollisionWorkspace& ws,
                    const StepOptions& opt = {}, bool record_dissipation = true);

struct LedgerReport {
  std::vector<double> times;
  std::vector<double> half_m_norm_sq;  // (1/2)||M_{lambda(t)} f(t)||^2
  std::vector<double> log_term;        // ||(log<D>)^{1/2} M f||^2
  std::vector<double> q_pair_term;     // (Q(f, Mf), Mf)
  std::vector<double> commutator_term; // (M Q(f,f) - Q(f, Mf), Mf)
  std::vector<double> coercive_term;   // ||M f||^2_{H^s_{gamma/2}} (diagnostic)
  double lhs = 0.0;                    // A(T) - A(0)
  double rhs = 0.0;                    // N*int(log) + int(q_pair) + int(comm)
  double residual = 0.0;
  double residual_rel = 0.0;           // residual / max(|terms|)
};

LedgerReport energy_ledger(const Trajectory& traj, const MollifierSchedule& sched,
                           const CollisionWorkspace& ws);

struct TrackerRow {
  double t = 0.0;
  std::vector<double> m_norm;   // ||M_{lambda(t)}^delta f||_{L^2} per delta
  std::vector<double> sobolev;  // ||f||_{H^k_ell} per requested order
  double tail_exponent = 0.0;   // fitted shell-decay power p: |fhat| ~ |xi|^{-p}
};

struct TrackerReport {
  std::vector<double> deltas;
  std::vector<std::pair<double, double>> orders;  // (k, ell)
  std::vector<TrackerRow> rows;
};

TrackerReport regularity_tracker(const Trajectory& traj, const MollifierSchedule& sched,
                                 const std::vector<std::pair<double, double>>& orders,
                                 const std::vector<double>& deltas = {1.0, 1e-1, 1e-2,
                                                                     1e-3, 0.0});

/// Log-log slope fit of shell-averaged |fhat| over a frequency band
/// [xi_lo, xi_hi]; band (0,0) means the upper half of the resolved ball.
double shell_decay_exponent(const Distribution& f, double xi_lo = 0.0,
                            double xi_hi = 0.0);

}  // namespace blz
