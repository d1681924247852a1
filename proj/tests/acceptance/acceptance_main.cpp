// Acceptance suite: one pass/fail line per criterion.
//
// Usage: blz_acceptance <path-to-blz-binary> [comma-separated criteria]
//
// Every configuration and tolerance below is pinned; the suite is fully
// deterministic.  Criteria 10 and 12 exercise the installed CLI binary
// end-to-end; everything else drives the library directly.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "blz/evolution.hpp"
#include "blz/families.hpp"
#include "blz/veritas.hpp"

using namespace blz;
namespace fs = std::filesystem;

namespace {

std::string g_blz_binary;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmtnum(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Conservation and entropy monotonicity on a perturbed equilibrium.
Outcome criterion_conservation() {
  const int n = 32;
  const double L = 8.0;
  auto grid = make_grid(n, L);
  CrossSection xs;
  xs.gamma = 0.0;
  xs.s = 0.25;
  xs.theta_min = 1e-3;
  WorkspaceOptions opt;
  opt.xi_max = 6.3;
  opt.budget_cap = 1e14;
  CollisionWorkspace ws(grid, xs, opt);
  Distribution f0(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec3 v = grid.velocity(i, j, k);
        const double m = std::pow(2.0 * M_PI, -1.5) * std::exp(-0.5 * norm2(v));
        const Vec3 d = {v[0] - 1.0, v[1], v[2]};
        f0.values[grid.index(i, j, k)] = m * (1.0 + 0.3 * std::exp(-norm2(d)));
      }
  const auto traj = simulate(f0, 1.0, 0.05, Scheme::Rk4, 10, ws);

  const auto& m0 = traj.moment_series.front();
  double dm = 0.0, dp = 0.0, de = 0.0;
  bool entropy_monotone = true, dissipation_nonneg = true;
  for (std::size_t i = 0; i < traj.moment_series.size(); ++i) {
    const auto& m = traj.moment_series[i];
    dm = std::max(dm, std::abs(m.mass - m0.mass) / m0.mass);
    de = std::max(de, std::abs(m.energy - m0.energy) / m0.energy);
    for (int d = 0; d < 3; ++d)
      dp = std::max(dp, std::abs(m.momentum[d] - m0.momentum[d]) / m0.mass);
    if (i > 0 &&
        m.entropy > traj.moment_series[i - 1].entropy + 1e-10)
      entropy_monotone = false;
    if (traj.dissipation_series[i] < 0.0) dissipation_nonneg = false;
  }
  Outcome out;
  out.ok = dm <= 1e-6 && dp <= 1e-6 && de <= 1e-6 && entropy_monotone &&
           dissipation_nonneg;
  out.detail = "mass drift " + fmtnum(dm) + ", momentum " + fmtnum(dp) +
               ", energy " + fmtnum(de) +
               (entropy_monotone ? ", entropy monotone" : ", ENTROPY INCREASED") +
               (dissipation_nonneg ? ", D >= 0" : ", D < 0");
  return out;
}

// ---------------------------------------------------------------------------
// 2. Discrete equilibrium annihilation, improving under refinement.
Outcome criterion_equilibrium_residual() {
  auto residual = [](int n, double theta_min, int refine) {
    auto grid = make_grid(n, 6.0);
    CrossSection xs;
    xs.gamma = 0.0;
    xs.s = 0.25;
    xs.theta_min = theta_min;
    WorkspaceOptions opt;
    opt.azimuth_nodes = 8;
    opt.budget_cap = 1e13;
    opt.table_refine = refine;
    CollisionWorkspace ws(grid, xs, opt);
    const auto m = make_maxwellian(grid);
    const auto q = apply_q(m, m, ws);
    return norm(q, NormRequest::lp(2.0)) / norm(m, NormRequest::lp(2.0));
  };
  const double coarse = residual(16, 1e-3, 0);
  const double fine = residual(32, 5e-4, 8);
  Outcome out;
  out.ok = coarse <= 1e-3 && coarse / fine >= 4.0;
  out.detail = "|Q(M,M)|/|M| = " + fmtnum(coarse) + " at n=16, " + fmtnum(fine) +
               " at n=32 (ratio " + fmtnum(coarse / fine) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Frequency-side trilinear form vs direct velocity-pair quadrature.
Outcome criterion_route_agreement() {
  auto grid = make_grid(8, 4.0);
  CrossSection xs;
  xs.gamma = 0.0;
  xs.s = 0.25;
  xs.theta_min = 0.1;
  WorkspaceOptions opt;
  opt.azimuth_nodes = 8;
  opt.theta_panels = 8;
  opt.nodes_per_panel = 6;
  opt.budget_cap = 1e13;
  CollisionWorkspace ws(grid, xs, opt);
  const auto fam = generate_family(grid, FamilyKind::GaussianMixture, 60, 1001);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto& g = fam[3 * t];
    const auto& f = fam[3 * t + 1];
    const auto& h = fam[3 * t + 2];
    const auto G = forward_transform(g);
    const auto F = forward_transform(f);
    const auto H = forward_transform(h);
    const double wf = weak_form_pairing(g, f, h, ws, KineticPart::Compact);
    const double tri = 0.5 * (trilinear_qc(G, F, H, ws, KineticPart::Compact) +
                              trilinear_qc(F, G, H, ws, KineticPart::Compact));
    worst = std::max(worst, std::abs(wf - tri) / std::max(std::abs(wf), 1e-12));
  }
  Outcome out;
  out.ok = worst <= 1e-3;
  out.detail = "20 triples, worst relative gap " + fmtnum(worst);
  return out;
}

// ---------------------------------------------------------------------------
// 4. Fourth-moment relaxation rate vs the one-dimensional angular oracle.
Outcome criterion_moment_rate() {
  const int n = 32;
  auto grid = make_grid(n, 8.0);
  CrossSection xs;
  xs.gamma = 0.0;
  xs.s = 0.25;
  xs.theta_min = 1e-2;
  WorkspaceOptions opt;
  opt.budget_cap = 1e14;
  CollisionWorkspace ws(grid, xs, opt);
  Distribution f0(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double r2 = norm2(grid.velocity(i, j, k));
        f0.values[grid.index(i, j, k)] =
            0.5 * std::pow(2.0 * M_PI * 0.5, -1.5) * std::exp(-r2 / 1.0) +
            0.5 * std::pow(2.0 * M_PI * 1.5, -1.5) * std::exp(-r2 / 3.0);
      }
  const auto traj = simulate(f0, 1.0, 0.05, Scheme::Rk4, 10, ws, {}, false);

  // Oracle: for Maxwell interactions the deviation of the fourth moment from
  // its equilibrium value decays at rate rho * Lambda / 2 with
  // Lambda = 2 pi int b(cos theta) sin^3(theta) dtheta, evaluated here with
  // the workspace's own angular rule (weights already carry 2 pi sin theta).
  const auto& rule = ws.rule();
  double lambda = 0.0;
  for (std::size_t i = 0; i < rule.theta.size(); ++i)
    lambda += rule.weight[i] * rule.b_value[i] *
              std::pow(std::sin(rule.theta[i]), 2);
  const auto& m0 = traj.moment_series.front();
  const double rho = m0.mass;
  const double m2 = 2.0 * m0.energy;
  const double m4eq = (5.0 / 3.0) * m2 * m2 / rho;
  const double rate_oracle = 0.5 * lambda * rho;

  double worst = 0.0;
  double prev = fourth_moment(traj.states.front()) - m4eq;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    const double dev = fourth_moment(traj.states[i]) - m4eq;
    const double rate =
        std::log(prev / dev) / (traj.times[i] - traj.times[i - 1]);
    worst = std::max(worst, std::abs(rate / rate_oracle - 1.0));
    prev = dev;
  }
  Outcome out;
  out.ok = worst <= 0.02;
  out.detail = "oracle rate " + fmtnum(rate_oracle) +
               ", worst interval deviation " + fmtnum(100.0 * worst) + "%";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Lq interpolation inequality across 1000 cases at the fixed constant 2.
Outcome criterion_lq_interpolation() {
  auto grid = make_grid(16, 4.0);
  auto fam = generate_family(grid, FamilyKind::GaussianMixture, 5, 101);
  const auto fam2 = generate_family(grid, FamilyKind::BumpSum, 5, 202);
  fam.insert(fam.end(), fam2.begin(), fam2.end());
  const auto rep =
      check_interpolation_lq(fam, {1.5, 2.0, 3.0, 4.0, 8.0},
                             {0.2, 0.4, 0.6, 0.8}, {0.0, 0.5, 1.0, 2.0, 4.0});
  Outcome out;
  out.ok = rep.verdict == "pass" && rep.cases.size() == 1000 &&
           rep.sup_ratio <= 1.0;
  out.detail = std::to_string(rep.cases.size()) + " cases, sup ratio " +
               fmtnum(rep.sup_ratio) + " (" + rep.detail + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Mollifier difference bound, uniform across the delta sweep.
Outcome criterion_mollifier_difference() {
  MollifierSymbol base;
  base.lambda = 2.0;
  base.n0 = 4.0;
  const std::vector<double> deltas = {1.0, 1e-1, 1e-2, 1e-3};
  const auto plain =
      check_mollifier_difference(base, 2.0, deltas, 100000, 40.0, 424242, false);
  const auto moderated =
      check_mollifier_difference(base, 2.0, deltas, 100000, 40.0, 424242, true);
  Outcome out;
  out.ok = plain.verdict == "pass" && moderated.verdict == "pass" &&
           std::isfinite(plain.sup_ratio) && std::isfinite(moderated.sup_ratio);
  out.detail = "plain sup " + fmtnum(plain.sup_ratio) + " (" + plain.detail +
               "); moderated sup " + fmtnum(moderated.sup_ratio) + " (" +
               moderated.detail + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Coercivity lower bound with disjoint-half refit stability.
Outcome criterion_coercivity() {
  auto grid = make_grid(16, 4.0);
  UniformClassParams cls;
  cls.D0 = 1.0;
  cls.E0 = 4.0;
  const auto gfam =
      generate_in_class(grid, FamilyKind::GaussianMixture, 20, 7001, cls);
  const auto ffam =
      generate_family(grid, FamilyKind::RandomBandLimited, 20, 7002, 3.5);
  Outcome out;
  out.ok = true;
  for (double gamma : {0.0, 0.5}) {
    CrossSection xs;
    xs.gamma = gamma;
    xs.s = 0.25;
    xs.theta_min = 1e-2;
    WorkspaceOptions opt;
    opt.budget_cap = 1e13;
    opt.xi_max = 4.0;
    CollisionWorkspace ws(grid, xs, opt);
    const auto rep =
        check_coercivity(gfam, ffam, CoercivityVariant::Uniform, 0.0, ws);
    const bool halves_ok =
        rep.trail.size() == 2 &&
        std::max(rep.trail[0], rep.trail[1]) /
                std::min(rep.trail[0], rep.trail[1]) <
            2.0;
    if (!(rep.verdict == "pass" && rep.c_fit > 0.0 && halves_ok)) out.ok = false;
    out.detail += (gamma == 0.0 ? "gamma=0: " : "; gamma=0.5: ") + rep.verdict +
                  ", c0 " + fmtnum(rep.c_fit) +
                  (rep.trail.size() == 2
                       ? ", halves " + fmtnum(rep.trail[0]) + "/" +
                             fmtnum(rep.trail[1])
                       : "");
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8. Entropy-dissipation coercivity, stable under angular-rule refinement.
Outcome criterion_entropy_coercivity() {
  auto grid = make_grid(8, 4.0);
  CrossSection xs;
  xs.gamma = -0.5;
  xs.s = 0.5;
  xs.theta_min = 1e-2;
  const auto fam = generate_family(grid, FamilyKind::GaussianMixture, 20, 8001);
  std::vector<double> c_fits;
  Outcome out;
  out.ok = true;
  for (int panels : {4, 8}) {
    WorkspaceOptions opt;
    opt.budget_cap = 1e13;
    opt.theta_panels = panels;
    opt.nodes_per_panel = 4;
    CollisionWorkspace ws(grid, xs, opt);
    const auto rep = check_entropy_coercivity(fam, ws);
    if (!(rep.verdict == "pass" && rep.c_fit > 0.0)) out.ok = false;
    c_fits.push_back(rep.c_fit);
    out.detail += (panels == 4 ? "panels=4: " : "; panels=8: ") + rep.verdict +
                  ", c " + fmtnum(rep.c_fit);
  }
  const double ratio = std::max(c_fits[0], c_fits[1]) /
                       std::min(c_fits[0], c_fits[1]);
  if (!(ratio <= 2.0)) out.ok = false;
  out.detail += "; refinement ratio " + fmtnum(ratio);
  return out;
}

// ---------------------------------------------------------------------------
// 9. Commutator bound, stable across the delta sweep.
Outcome criterion_commutator() {
  auto grid = make_grid(8, 4.0);
  CrossSection xs;
  xs.gamma = 0.0;
  xs.s = 0.25;
  xs.theta_min = 1e-2;
  WorkspaceOptions opt;
  opt.budget_cap = 1e13;
  opt.table_refine = 8;
  CollisionWorkspace ws(grid, xs, opt);
  const auto ffam = generate_family(grid, FamilyKind::GaussianMixture, 20, 9001);
  const auto gfam = generate_family(grid, FamilyKind::BumpSum, 20, 9002);
  const auto hfam =
      generate_family(grid, FamilyKind::RandomBandLimited, 20, 9003, 4.0);
  const auto rep = check_commutator(ffam, gfam, hfam, 1.0, 2.5,
                                    {1.0, 1e-1, 1e-2, 1e-3}, 0.2, ws, 120);
  Outcome out;
  out.ok = rep.verdict == "pass" && rep.trail.size() == 4 &&
           std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0;
  out.detail = rep.verdict + ", " + std::to_string(rep.cases.size()) +
               " cases, " + rep.detail;
  return out;
}

// ---------------------------------------------------------------------------
// 10 and 12 share two CLI runs of the same pinned configuration from two
// different working directories.

const char* kSmoothingIni =
    "[grid]\n"
    "n_points = 64\n"
    "half_width = 8.0\n"
    "[cross_section]\n"
    "gamma = 0.0\n"
    "s = 0.25\n"
    "theta_min = 1e-3\n"
    "[collision]\n"
    "xi_max = 5.0\n"
    "budget_cap = 1e14\n"
    "[time]\n"
    "dt = 0.025\n"
    "t_end = 1.0\n"
    "scheme = rk2\n"
    "checkpoints = 10\n"
    "[initial]\n"
    "type = ball_indicator\n"
    "radius = 2.0\n"
    "[schedule]\n"
    "N = 1.0\n"
    "a = -2.0\n"
    "delta = 1e-2\n"
    "delta_set = 1.0, 1e-1, 1e-2, 1e-3\n"
    "[run]\n"
    "seed = 20260824\n"
    "deterministic = true\n"
    "output_dir = out\n";

int run_smoothing_cli(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "run.ini") << kSmoothingIni;
  const std::string cmd = "cd '" + dir.string() + "' && '" + g_blz_binary +
                          "' smoothing-experiment -c run.ini > run.log 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const fs::path kRunA = "/tmp/blz_acceptance_run_a";
const fs::path kRunB = "/tmp/blz_acceptance_run_b";

Outcome criterion_smoothing() {
  const int rc = run_smoothing_cli(kRunA);
  Outcome out;
  if (rc != 0) {
    out.detail = "CLI exit code " + std::to_string(rc);
    return out;
  }
  std::ifstream in(kRunA / "out" / "verdict.json");
  if (!in.good()) {
    out.detail = "verdict.json missing";
    return out;
  }
  const auto v = nlohmann::json::parse(in);
  out.ok = v.at("tail_gain_ok").get<bool>() &&
           v.at("m_norm_finite").get<bool>() && v.at("ledger_ok").get<bool>() &&
           v.at("ledger_halving_ok").get<bool>() &&
           v.at("dissipation_integral_finite").get<bool>() &&
           v.at("verdict").get<std::string>() == "pass";
  out.detail = "tail gain " + fmtnum(v.at("tail_gain").get<double>()) +
               ", ledger residual " +
               fmtnum(v.at("ledger_residual_rel").get<double>()) +
               " (coarse " +
               fmtnum(v.at("ledger_residual_rel_coarse").get<double>()) +
               "), int D dt " +
               fmtnum(v.at("dissipation_integral").get<double>()) +
               ", verdict " + v.at("verdict").get<std::string>();
  return out;
}

// ---------------------------------------------------------------------------
// 11. Self-convergence order of the time integrators.
Outcome criterion_convergence_order() {
  auto grid = make_grid(8, 4.0);
  CrossSection xs;
  xs.gamma = 0.0;
  xs.s = 0.25;
  xs.theta_min = 1e-2;
  WorkspaceOptions opt;
  opt.budget_cap = 1e13;
  CollisionWorkspace ws(grid, xs, opt);
  const Distribution f0 = make_bkw(grid, 0.65);
  StepOptions so;
  so.conserve_moments = false;
  const double t_end = 0.5;
  const double dts[3] = {0.1, 0.05, 0.025};
  Outcome out;
  out.ok = true;
  for (Scheme sch : {Scheme::Rk2, Scheme::Rk4}) {
    const Distribution ref =
        simulate(f0, t_end, dts[2] / 8.0, sch, 1, ws, so, false).states.back();
    double err[3];
    for (int i = 0; i < 3; ++i) {
      const Distribution ft =
          simulate(f0, t_end, dts[i], sch, 1, ws, so, false).states.back();
      double acc = 0.0;
      for (std::size_t k = 0; k < ft.values.size(); ++k)
        acc += std::pow(ft.values[k] - ref.values[k], 2);
      err[i] = std::sqrt(acc);
    }
    const double o1 = std::log2(err[0] / err[1]);
    const double o2 = std::log2(err[1] / err[2]);
    const double need = sch == Scheme::Rk2 ? 1.9 : 3.8;
    if (!(o1 >= need && o2 >= need)) out.ok = false;
    out.detail += std::string(sch == Scheme::Rk2 ? "rk2" : "; rk4") +
                  " orders " + fmtnum(o1) + ", " + fmtnum(o2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 12. Byte-identical artifacts for two runs of the same configuration.
Outcome criterion_determinism() {
  Outcome out;
  if (!fs::exists(kRunA / "out" / "verdict.json")) {
    out.detail = "reference run missing (criterion 10 must run first)";
    return out;
  }
  const int rc = run_smoothing_cli(kRunB);
  if (rc != 0) {
    out.detail = "second run: CLI exit code " + std::to_string(rc);
    return out;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(kRunA / "out")) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename();
    const fs::path other = kRunB / "out" / name;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      out.detail = "artifact differs: " + name.string();
      return out;
    }
    ++compared;
  }
  out.ok = compared > 0;
  out.detail = std::to_string(compared) + " artifacts byte-identical";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <blz-binary> [criteria]\n", argv[0]);
    return 2;
  }
  g_blz_binary = fs::absolute(argv[1]).string();

  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "conservation-and-entropy-monotonicity", criterion_conservation},
      {2, "equilibrium-annihilation-refinement", criterion_equilibrium_residual},
      {3, "trilinear-route-agreement", criterion_route_agreement},
      {4, "fourth-moment-relaxation-rate", criterion_moment_rate},
      {5, "lq-interpolation-sweep", criterion_lq_interpolation},
      {6, "mollifier-difference-uniformity", criterion_mollifier_difference},
      {7, "coercivity-lower-bound", criterion_coercivity},
      {8, "entropy-dissipation-coercivity", criterion_entropy_coercivity},
      {9, "commutator-delta-stability", criterion_commutator},
      {10, "rough-datum-smoothing", criterion_smoothing},
      {11, "integrator-self-convergence", criterion_convergence_order},
      {12, "deterministic-artifacts", criterion_determinism},
  };

  std::vector<int> selected;
  if (argc > 2) {
    std::stringstream ss(argv[2]);
    std::string tok;
    while (std::getline(ss, tok, ',')) selected.push_back(std::stoi(tok));
  }

  int failures = 0;
  for (const auto& e : entries) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), e.id) == selected.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out.ok = false;
      out.detail = std::string("exception: ") + ex.what();
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("criterion %2d %-42s %s  [%s; %.0f s]\n", e.id, e.name,
                out.ok ? "PASS" : "FAIL", out.detail.c_str(), wall);
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  if (failures == 0) std::printf("acceptance: all criteria passed\n");
  else std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
