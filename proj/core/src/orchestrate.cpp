#include "blz/orchestrate.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "blz/evolution.hpp"
#include "blz/families.hpp"
#include "blz/field_io.hpp"

namespace blz {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::uint64_t hash_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash " + p.string());
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  return h;
}

/// Collects artifact names as they are written, then seals the directory
/// with a manifest carrying the config copy, its hash, and file checksums.
class ArtifactSink {
 public:
  explicit ArtifactSink(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.run.output_dir) {
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }

  fs::path path(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }

  void write_text(const std::string& name, const std::string& content) {
    std::ofstream out(path(name), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + name);
    out << content;
  }

  void write_json(const std::string& name, const json& j) {
    write_text(name, j.dump(2) + "\n");
  }

  void finalize(const std::string& subcommand) {
    json manifest;
    manifest["subcommand"] = subcommand;
    manifest["config_hash"] = config_hash(cfg_);
    manifest["regime"] = cfg_.regime;
    manifest["config"] = serialize_config(cfg_);
    json artifacts = json::object();
    std::sort(names_.begin(), names_.end());
    for (const auto& name : names_) {
      std::ostringstream os;
      os << std::hex << hash_file(dir_ / name);
      artifacts[name] = os.str();
    }
    manifest["artifacts"] = artifacts;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << "\n";
  }

 private:
  RunConfig cfg_;
  fs::path dir_;
  std::vector<std::string> names_;
};

json fit_report_json(const FitReport& rep, bool include_cases = false) {
  json j;
  j["inequality"] = rep.inequality_id;
  j["verdict"] = rep.verdict;
  j["detail"] = rep.detail;
  j["c_fit"] = rep.c_fit;
  j["big_c_fit"] = rep.big_c_fit;
  j["sup_ratio"] = rep.sup_ratio;
  j["trail"] = rep.trail;
  j["seed"] = rep.seed;
  j["case_count"] = rep.cases.size();
  if (include_cases) {
    json cases = json::array();
    for (const auto& c : rep.cases)
      cases.push_back({{"lhs", c.lhs},
                       {"a", c.a_term},
                       {"b", c.b_term},
                       {"ratio", c.ratio}});
    j["cases"] = cases;
  }
  return j;
}

json moments_json(const Moments& m) {
  return {{"mass", m.mass},
          {"momentum", {m.momentum[0], m.momentum[1], m.momentum[2]}},
          {"energy", m.energy},
          {"entropy", m.entropy}};
}

std::vector<double> tail_band(const RunConfig& cfg, const VelocityGrid& grid) {
  // Under frequency-ball truncation the modes beyond xi_max never evolve, so
  // decay exponents must be fitted inside the resolved ball; the top of the
  // ball is excluded as well since amplitudes there sit closest to the
  // quadrature noise floor.
  const double resolved = cfg.collision.xi_max > 0.0
                              ? cfg.collision.xi_max
                              : grid.freq_spacing() * (grid.n() / 2 - 1);
  return {0.3 * resolved, 0.8 * resolved};
}

}  // namespace

Distribution build_initial(const VelocityGrid& grid, const InitialSection& init,
                           std::uint64_t seed) {
  if (init.type == "maxwellian") {
    Distribution f = make_maxwellian(grid, init.rho, init.velocity,
                                     init.temperature);
    if (init.perturbation != 0.0) {
      // Smooth isotropic bump, mass-neutral to first order in the amplitude.
      const double w = 0.5 * grid.half_width();
      const int n = grid.n();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const Vec3 v = grid.velocity(i, j, k);
            const double r2 = norm2(v) / (w * w);
            f.values[f.grid.index(i, j, k)] *=
                1.0 + init.perturbation * (1.0 - r2) * std::exp(-r2);
          }
    }
    return f;
  }
  if (init.type == "bkw") return make_bkw(grid, init.k_shape, init.rho);
  if (init.type == "ball_indicator") {
    Distribution f = make_ball_indicator(grid, init.radius);
    if (init.rho != 1.0)
      for (auto& x : f.values) x *= init.rho;
    return f;
  }
  return generate_family(grid, parse_family_kind(init.type), 1, seed)[0];
}

CollisionWorkspace build_workspace(const RunConfig& cfg) {
  return CollisionWorkspace(make_grid(cfg.grid.n_points, cfg.grid.half_width),
                            cfg.cross_section, cfg.collision);
}

void run_simulate(const RunConfig& cfg) {
  ArtifactSink sink(cfg);
  const CollisionWorkspace ws = build_workspace(cfg);
  const Distribution f0 = build_initial(ws.grid(), cfg.initial, cfg.run.seed);
  Trajectory traj = simulate(f0, cfg.time.t_end, cfg.time.dt,
                             parse_scheme(cfg.time.scheme), cfg.time.checkpoints,
                             ws);
  traj.provenance = config_hash(cfg);

  std::ostringstream csv;
  csv << "t,mass,momentum_1,momentum_2,momentum_3,energy,entropy,dissipation\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& m = traj.moment_series[i];
    csv << fmt(traj.times[i]) << "," << fmt(m.mass) << "," << fmt(m.momentum[0])
        << "," << fmt(m.momentum[1]) << "," << fmt(m.momentum[2]) << ","
        << fmt(m.energy) << "," << fmt(m.entropy) << ","
        << fmt(traj.dissipation_series[i]) << "\n";
  }
  sink.write_text("conservation.csv", csv.str());

  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    std::ostringstream name;
    name << "checkpoint_" << i << ".fld";
    write_field(sink.path(name.str()).string(), traj.states[i],
                "f at t=" + fmt(traj.times[i]));
  }

  const auto& m0 = traj.moment_series.front();
  const double mom_scale = std::max(m0.mass + m0.energy, 1e-300);
  double mass_drift = 0.0, mom_drift = 0.0, energy_drift = 0.0;
  bool entropy_monotone = true, dissipation_nonneg = true;
  for (std::size_t i = 0; i < traj.moment_series.size(); ++i) {
    const auto& m = traj.moment_series[i];
    mass_drift = std::max(mass_drift, std::abs(m.mass - m0.mass) /
                                          std::max(std::abs(m0.mass), 1e-300));
    for (int d = 0; d < 3; ++d)
      mom_drift = std::max(mom_drift,
                           std::abs(m.momentum[d] - m0.momentum[d]) / mom_scale);
    energy_drift = std::max(energy_drift,
                            std::abs(m.energy - m0.energy) /
                                std::max(std::abs(m0.energy), 1e-300));
    if (i > 0 && m.entropy > traj.moment_series[i - 1].entropy + 1e-12)
      entropy_monotone = false;
    if (traj.dissipation_series[i] < -1e-10 * std::abs(m0.mass))
      dissipation_nonneg = false;
  }
  json summary;
  summary["config_hash"] = config_hash(cfg);
  summary["regime"] = cfg.regime;
  summary["checkpoints"] = traj.times.size();
  summary["initial_moments"] = moments_json(m0);
  summary["final_moments"] = moments_json(traj.moment_series.back());
  summary["mass_drift_rel"] = mass_drift;
  summary["momentum_drift_rel"] = mom_drift;
  summary["energy_drift_rel"] = energy_drift;
  summary["entropy_monotone"] = entropy_monotone;
  summary["dissipation_nonnegative"] = dissipation_nonneg;
  summary["clipped_mass_total"] = traj.clipped_mass_total;
  sink.write_json("summary.json", summary);
  sink.finalize("simulate");
}

void run_collision_apply(const RunConfig& cfg, const std::string& f_path,
                         const std::string& g_path) {
  ArtifactSink sink(cfg);
  const LoadedField lf = read_field(f_path);
  const LoadedField lg = read_field(g_path);
  const VelocityGrid cfg_grid = make_grid(cfg.grid.n_points, cfg.grid.half_width);
  if (!(lf.f.grid == cfg_grid) || !(lg.f.grid == cfg_grid))
    throw ConfigError("collision-apply: field grids disagree with [grid] section");
  const CollisionWorkspace ws(cfg_grid, cfg.cross_section, cfg.collision);

  const Distribution q = apply_q(lg.f, lf.f, ws);
  write_field(sink.path("q.fld").string(), q, "Q(g,f)");

  const Distribution loss = loss_term(lg.f, lf.f, ws);
  Distribution gain(q.grid);
  for (std::size_t i = 0; i < q.values.size(); ++i)
    gain.values[i] = q.values[i] + loss.values[i];

  json diag;
  diag["config_hash"] = config_hash(cfg);
  diag["regime"] = cfg.regime;
  diag["mass_residual"] = quadrature(q, WeightSpec::unit());
  diag["momentum_residual"] = {quadrature(q, WeightSpec::monomial(1, 0, 0)),
                               quadrature(q, WeightSpec::monomial(0, 1, 0)),
                               quadrature(q, WeightSpec::monomial(0, 0, 1))};
  diag["energy_residual"] = quadrature(q, WeightSpec::monomial(2, 0, 0)) +
                            quadrature(q, WeightSpec::monomial(0, 2, 0)) +
                            quadrature(q, WeightSpec::monomial(0, 0, 2));
  diag["q_l2"] = norm(q, NormRequest::lp(2.0));
  diag["gain_l2"] = norm(gain, NormRequest::lp(2.0));
  diag["loss_l2"] = norm(loss, NormRequest::lp(2.0));
  sink.write_json("collision_diag.json", diag);
  sink.finalize("collision-apply");
}

void run_measure(const RunConfig& cfg, const std::string& field_path) {
  ArtifactSink sink(cfg);
  const LoadedField lf = read_field(field_path);
  const Distribution& f = lf.f;
  const double gamma = cfg.cross_section.gamma;
  const double s = cfg.cross_section.s;
  json out;
  out["config_hash"] = config_hash(cfg);
  out["regime"] = cfg.regime;
  out["label"] = lf.label;
  out["moments"] = moments_json(moments(f));
  out["fourth_moment"] = fourth_moment(f);
  out["l1"] = norm(f, NormRequest::lp(1.0));
  out["l1_2"] = norm(f, NormRequest::lp(1.0, 2.0));
  out["l2"] = norm(f, NormRequest::lp(2.0));
  out["llogl"] = norm(f, NormRequest::llogl());
  out["h_s_gamma_half"] = norm(f, NormRequest::sobolev(s, 0.5 * gamma));
  UniformClassParams ucp{cfg.verify.d0, cfg.verify.e0};
  const auto cls = uniform_class_check(f, ucp);
  out["uniform_class"] = {{"member", cls.member},
                         {"mass", cls.mass},
                         {"l1_2_plus_llogl", cls.l1_2_plus_llogl},
                         {"truncation_property", cls.truncation_property},
                         {"detail", cls.detail}};
  sink.write_json("measure.json", out);
  sink.finalize("measure");
}

FitReport run_verify(const RunConfig& cfg) {
  ArtifactSink sink(cfg);
  const std::string& id = cfg.verify.inequality;
  const VelocityGrid grid = make_grid(cfg.grid.n_points, cfg.grid.half_width);
  const auto& v = cfg.verify;
  const std::uint64_t seed = cfg.run.seed;
  const UniformClassParams ucp{v.d0, v.e0};
  FitReport rep;

  if (id == "coer-2.2" || id == "coer-2.3") {
    const CollisionWorkspace ws(grid, cfg.cross_section, cfg.collision);
    const auto g_family =
        generate_in_class(grid, FamilyKind::GaussianMixture, v.family_count,
                          seed + 1, ucp);
    const auto f_family = generate_family(grid, FamilyKind::RandomBandLimited,
                                          v.family_count, seed + 2);
    const auto variant = id == "coer-2.2" ? CoercivityVariant::Uniform
                                          : CoercivityVariant::SoftWeighted;
    rep = check_coercivity(g_family, f_family, variant, v.s_prime, ws);
    if (rep.verdict == "pass" && g_family.size() >= 4) {
      // Class-uniformity: disjoint g-subfamilies of the same class must fit
      // comparable coercive constants.
      const std::size_t half = g_family.size() / 2;
      const auto lo = check_coercivity(
          {g_family.begin(), g_family.begin() + half}, f_family, variant,
          v.s_prime, ws);
      const auto hi = check_coercivity(
          {g_family.begin() + half, g_family.end()}, f_family, variant,
          v.s_prime, ws);
      const double ratio =
          std::max(lo.c_fit, hi.c_fit) / std::max(std::min(lo.c_fit, hi.c_fit),
                                                  1e-300);
      rep.detail += " subfamily c0: " + fmt(lo.c_fit) + " vs " + fmt(hi.c_fit);
      if (!(lo.c_fit > 0.0) || !(hi.c_fit > 0.0) || ratio >= 2.0)
        rep.verdict = "fail";
    }
  } else if (id == "entropy-2.6") {
    const CollisionWorkspace ws(grid, cfg.cross_section, cfg.collision);
    const auto f_family = generate_family(grid, FamilyKind::GaussianMixture,
                                          v.family_count, seed + 2);
    rep = check_entropy_coercivity(f_family, ws);
  } else if (id == "upper-3.5") {
    const CollisionWorkspace ws(grid, cfg.cross_section, cfg.collision);
    const auto f_family = generate_family(grid, FamilyKind::GaussianMixture,
                                          v.family_count, seed + 1);
    const auto g_family =
        generate_family(grid, FamilyKind::BumpSum, v.family_count, seed + 2);
    const auto h_family = generate_family(grid, FamilyKind::RandomBandLimited,
                                          v.family_count, seed + 3);
    rep = check_upper_bound(f_family, g_family, h_family, v.r, v.ell, ws,
                            v.max_cases);
  } else if (id == "commutator-3.4") {
    const CollisionWorkspace ws(grid, cfg.cross_section, cfg.collision);
    const auto f_family = generate_family(grid, FamilyKind::GaussianMixture,
                                          v.family_count, seed + 1);
    const auto g_family =
        generate_family(grid, FamilyKind::BumpSum, v.family_count, seed + 2);
    const auto h_family = generate_family(grid, FamilyKind::RandomBandLimited,
                                          v.family_count, seed + 3);
    rep = check_commutator(f_family, g_family, h_family, v.lambda,
                           cfg.schedule.n0, cfg.schedule.delta_set, v.s_prime,
                           ws, v.max_cases);
  } else if (id == "interp-3.5") {
    const auto f_family = generate_family(grid, FamilyKind::GaussianMixture,
                                          v.family_count, seed + 2);
    rep = check_interpolation_sobolev(f_family, v.k, v.p, v.delta_interp);
  } else if (id == "interp-3.6") {
    const auto f_family = generate_family(grid, FamilyKind::GaussianMixture,
                                          v.family_count, seed + 2);
    rep = check_interpolation_lq(f_family, {2.0, 3.0, 4.0}, {0.3, 0.5, 0.7},
                                 {0.0, 1.0, 2.0});
  } else if (id == "mollifier-3.3" || id == "mollifier-3.4") {
    MollifierSymbol base;
    base.lambda = v.lambda;
    base.n0 = cfg.schedule.n0;
    rep = check_mollifier_difference(base, v.p, cfg.schedule.delta_set,
                                     v.samples, v.xi_range, seed,
                                     id == "mollifier-3.4");
  } else if (id == "symbol-3.2") {
    MollifierSymbol base;
    base.lambda = v.lambda;
    base.n0 = cfg.schedule.n0;
    rep = check_symbol_derivative(base, cfg.schedule.delta_set, v.xi_range,
                                  v.samples, seed);
  } else {
    throw ConfigError("verify.inequality: unknown id '" + id + "'");
  }

  rep.seed = seed;
  json j = fit_report_json(rep);
  j["config_hash"] = config_hash(cfg);
  j["regime"] = cfg.regime;
  sink.write_json("fit_report.json", j);
  sink.finalize("verify");
  if (rep.verdict == "fail")
    throw VerificationFailure(id + ": " + rep.detail);
  return rep;
}

void run_smoothing_experiment(const RunConfig& cfg) {
  ArtifactSink sink(cfg);
  const CollisionWorkspace ws = build_workspace(cfg);
  const Distribution f0 = build_initial(ws.grid(), cfg.initial, cfg.run.seed);

  // Checkpoint at twice the requested density so the time-quadrature
  // residual can be compared against its own coarsening.  The moment
  // projection is disabled here: the ledger identity accounts for the raw
  // dynamics f_t = Q(f,f), and projecting each increment would introduce a
  // systematic unledgered forcing term.
  StepOptions step_opt;
  step_opt.conserve_moments = false;
  const int n_fine = 2 * cfg.time.checkpoints;
  Trajectory traj = simulate(f0, cfg.time.t_end, cfg.time.dt,
                             parse_scheme(cfg.time.scheme), n_fine, ws, step_opt);
  traj.provenance = config_hash(cfg);

  MollifierSchedule sched;
  sched.N = cfg.schedule.N;
  sched.a = cfg.schedule.a;
  sched.delta = cfg.schedule.delta;
  sched.n0 = cfg.schedule.n0;

  std::vector<double> deltas = cfg.schedule.delta_set;
  if (std::find(deltas.begin(), deltas.end(), 0.0) == deltas.end())
    deltas.push_back(0.0);
  const std::vector<std::pair<double, double>> orders = {{0.25, 0.0}, {0.5, 0.0}};
  const TrackerReport tracker = regularity_tracker(traj, sched, orders, deltas);

  const auto band = tail_band(cfg, ws.grid());
  std::vector<double> tail;
  for (const auto& state : traj.states)
    tail.push_back(shell_decay_exponent(state, band[0], band[1]));

  const LedgerReport ledger_fine = energy_ledger(traj, sched, ws);
  Trajectory coarse;
  for (std::size_t i = 0; i < traj.times.size(); i += 2) {
    coarse.times.push_back(traj.times[i]);
    coarse.states.push_back(traj.states[i]);
  }
  if (coarse.times.back() != traj.times.back()) {
    coarse.times.push_back(traj.times.back());
    coarse.states.push_back(traj.states.back());
  }
  const LedgerReport ledger_coarse = energy_ledger(coarse, sched, ws);

  std::ostringstream tcsv;
  tcsv << "t,tail_exponent";
  for (double d : deltas) tcsv << ",m_norm_delta_" << d;
  for (const auto& [k, ell] : orders) tcsv << ",h_" << k << "_" << ell;
  tcsv << "\n";
  for (std::size_t i = 0; i < tracker.rows.size(); ++i) {
    const auto& row = tracker.rows[i];
    tcsv << fmt(row.t) << "," << fmt(tail[i]);
    for (double m : row.m_norm) tcsv << "," << fmt(m);
    for (double h : row.sobolev) tcsv << "," << fmt(h);
    tcsv << "\n";
  }
  sink.write_text("tracker.csv", tcsv.str());

  std::ostringstream lcsv;
  lcsv << "t,half_m_norm_sq,log_term,q_pair_term,commutator_term,coercive_term\n";
  for (std::size_t i = 0; i < ledger_fine.times.size(); ++i)
    lcsv << fmt(ledger_fine.times[i]) << "," << fmt(ledger_fine.half_m_norm_sq[i])
         << "," << fmt(ledger_fine.log_term[i]) << ","
         << fmt(ledger_fine.q_pair_term[i]) << ","
         << fmt(ledger_fine.commutator_term[i]) << ","
         << fmt(ledger_fine.coercive_term[i]) << "\n";
  sink.write_text("ledger.csv", lcsv.str());

  write_field(sink.path("initial.fld").string(), traj.states.front(), "f at t=0");
  write_field(sink.path("final.fld").string(), traj.states.back(),
              "f at t=" + fmt(traj.times.back()));

  // Verdict assembly.
  const double gain = tail.back() - tail.front();
  const std::size_t zero_idx = static_cast<std::size_t>(
      std::find(deltas.begin(), deltas.end(), 0.0) - deltas.begin());
  bool m_norm_finite = true;
  for (const auto& row : tracker.rows)
    if (!std::isfinite(row.m_norm[zero_idx])) m_norm_finite = false;
  double d_integral = 0.0;
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    d_integral += 0.5 * (traj.times[i] - traj.times[i - 1]) *
                  (traj.dissipation_series[i] + traj.dissipation_series[i - 1]);
  const bool gain_ok = gain >= 0.5;
  const bool ledger_ok = ledger_fine.residual_rel <= 0.01;
  const bool halving_ok =
      ledger_fine.residual <= 0.5 * ledger_coarse.residual ||
      ledger_fine.residual_rel <= 1e-4;  // already at the noise floor
  const bool d_ok = std::isfinite(d_integral);
  const bool pass = gain_ok && m_norm_finite && ledger_ok && halving_ok && d_ok;

  json verdict;
  verdict["config_hash"] = config_hash(cfg);
  verdict["regime"] = cfg.regime;
  verdict["tail_exponent_series"] = tail;
  verdict["tail_t0"] = tail.front();
  verdict["tail_tend"] = tail.back();
  verdict["tail_gain"] = gain;
  verdict["tail_gain_ok"] = gain_ok;
  verdict["m_norm_finite"] = m_norm_finite;
  verdict["ledger_lhs"] = ledger_fine.lhs;
  verdict["ledger_rhs"] = ledger_fine.rhs;
  verdict["ledger_residual_rel"] = ledger_fine.residual_rel;
  verdict["ledger_residual_rel_coarse"] = ledger_coarse.residual_rel;
  verdict["ledger_ok"] = ledger_ok;
  verdict["ledger_halving_ok"] = halving_ok;
  verdict["dissipation_integral"] = d_integral;
  verdict["dissipation_integral_finite"] = d_ok;
  verdict["verdict"] = pass ? "pass" : "fail";
  sink.write_json("verdict.json", verdict);
  sink.finalize("smoothing-experiment");
  if (!pass)
    throw VerificationFailure("smoothing-experiment: verdict fail (see verdict.json)");
}

void run_report(const std::string& manifest_dir, const std::string& out_dir) {
  const fs::path dir(manifest_dir);
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path))
    throw ConfigError("report: missing manifest: " + manifest_path.string());
  json manifest;
  {
    std::ifstream in(manifest_path);
    in >> manifest;
  }
  fs::create_directories(out_dir);
  std::ostringstream report;
  std::vector<std::string> problems;

  report << "run report\n==========\n";
  report << "subcommand:  " << manifest.value("subcommand", "?") << "\n";
  report << "config hash: " << manifest.value("config_hash", "?") << "\n";
  report << "regime:      " << manifest.value("regime", "?") << "\n\n";

  for (const auto& [name, hash] : manifest["artifacts"].items()) {
    const fs::path p = dir / name;
    if (!fs::exists(p)) {
      problems.push_back("missing artifact: " + name);
      continue;
    }
    std::ostringstream os;
    os << std::hex << hash_file(p);
    if (os.str() != hash.get<std::string>())
      problems.push_back("checksum mismatch: " + name);
  }

  // Split every CSV artifact into plot-ready two-column series.
  for (const auto& [name, hash] : manifest["artifacts"].items()) {
    (void)hash;
    if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
    std::ifstream in(dir / name);
    if (!in) continue;
    std::string header;
    if (!std::getline(in, header)) continue;
    std::vector<std::string> cols;
    {
      std::istringstream hs(header);
      std::string c;
      while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    std::vector<std::vector<std::string>> data(cols.size());
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string cell;
      std::size_t ci = 0;
      while (std::getline(ls, cell, ',') && ci < cols.size())
        data[ci++].push_back(cell);
    }
    const std::string stem = name.substr(0, name.size() - 4);
    for (std::size_t ci = 1; ci < cols.size(); ++ci) {
      std::ofstream out(fs::path(out_dir) / (stem + "_" + cols[ci] + ".csv"),
                        std::ios::trunc);
      out << cols[0] << "," << cols[ci] << "\n";
      for (std::size_t r = 0; r < data[ci].size(); ++r)
        out << data[0][r] << "," << data[ci][r] << "\n";
    }
    report << "series from " << name << ": ";
    for (std::size_t ci = 1; ci < cols.size(); ++ci)
      report << (ci > 1 ? ", " : "") << cols[ci];
    report << "\n";
  }

  auto quote_json = [&](const std::string& name, std::vector<std::string> keys) {
    const fs::path p = dir / name;
    if (!fs::exists(p)) return;
    json j;
    std::ifstream in(p);
    in >> j;
    report << "\nfrom " << name << ":\n";
    for (const auto& key : keys)
      if (j.contains(key)) report << "  " << key << ": " << j[key].dump() << "\n";
  };
  quote_json("summary.json",
             {"mass_drift_rel", "momentum_drift_rel", "energy_drift_rel",
              "entropy_monotone", "dissipation_nonnegative"});
  quote_json("verdict.json",
             {"tail_t0", "tail_tend", "tail_gain", "ledger_residual_rel",
              "dissipation_integral", "verdict"});
  quote_json("fit_report.json",
             {"inequality", "verdict", "c_fit", "big_c_fit", "sup_ratio"});
  quote_json("collision_diag.json",
             {"mass_residual", "energy_residual", "q_l2", "gain_l2", "loss_l2"});
  quote_json("measure.json", {"moments", "l2", "llogl", "uniform_class"});

  // Sibling runs sharing this parent: flag provenance divergence.
  std::vector<std::pair<std::string, std::string>> sibling_hashes;
  for (const auto& entry : fs::directory_iterator(dir.parent_path())) {
    if (!entry.is_directory()) continue;
    const fs::path m = entry.path() / "manifest.json";
    if (!fs::exists(m)) continue;
    json sj;
    std::ifstream in(m);
    in >> sj;
    sibling_hashes.emplace_back(entry.path().filename().string(),
                                sj.value("config_hash", "?"));
  }
  if (sibling_hashes.size() > 1) {
    report << "\nsibling runs:\n";
    std::sort(sibling_hashes.begin(), sibling_hashes.end());
    for (const auto& [n, h] : sibling_hashes)
      report << "  " << n << ": config " << h << "\n";
    for (const auto& [n, h] : sibling_hashes)
      if (h != sibling_hashes.front().second) {
        report << "  note: config hashes differ across sibling runs\n";
        break;
      }
  }

  if (!problems.empty()) {
    report << "\nproblems:\n";
    for (const auto& p : problems) report << "  " << p << "\n";
  } else {
    report << "\nall artifact checksums verified\n";
  }
  std::ofstream out(fs::path(out_dir) / "report.txt", std::ios::trunc);
  out << report.str();
}

}  // namespace blz
