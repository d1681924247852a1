#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "blz/evolution.hpp"
#include "blz/field_io.hpp"
#include "blz/orchestrate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

void print_error(const std::string& type, const std::string& what) {
  nlohmann::json j;
  j["error"] = what;
  j["type"] = type;
  std::cerr << j.dump() << "\n";
}

blz::RunConfig load(const std::string& config_path, const std::string& output_dir) {
  blz::RunConfig cfg = blz::parse_config(config_path);
  if (!output_dir.empty()) cfg.run.output_dir = output_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral non-cutoff Boltzmann solver and inequality lab"};
  app.require_subcommand(1);

  std::string config_path, output_dir, f_path, g_path, field_path;
  std::string inequality, report_dir, report_out;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "run configuration file")
        ->required();
    sub->add_option("-o,--output", output_dir, "override [run] output_dir");
  };

  auto* sim = app.add_subcommand("simulate", "integrate f_t = Q(f,f)");
  add_config(sim);

  auto* capply = app.add_subcommand("collision-apply",
                                    "evaluate Q(g,f) for stored fields");
  add_config(capply);
  capply->add_option("--f", f_path, "field file for the f slot")->required();
  capply->add_option("--g", g_path, "field file for the g slot")->required();

  auto* meas = app.add_subcommand("measure", "functionals of a stored field");
  add_config(meas);
  meas->add_option("--field", field_path, "field file to measure")->required();

  auto* ver = app.add_subcommand("verify", "inequality verification sweep");
  add_config(ver);
  ver->add_option("--inequality", inequality,
                  "coer-2.2 coer-2.3 entropy-2.6 upper-3.5 commutator-3.4 "
                  "interp-3.5 interp-3.6 mollifier-3.3 mollifier-3.4 symbol-3.2");

  auto* smo = app.add_subcommand("smoothing-experiment",
                                 "rough-datum regularity-gain experiment");
  add_config(smo);

  auto* rep = app.add_subcommand("report", "summarize a run directory");
  rep->add_option("--dir", report_dir, "directory holding manifest.json")
      ->required();
  rep->add_option("--out", report_out, "report output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  // Advisory thread cap; all evaluations currently run single-threaded with a
  // fixed reduction order, so any positive value is accepted.
  if (const char* threads = std::getenv("BLZ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(threads, &end, 10);
    if (end == threads || *end != '\0' || v < 1) {
      print_error("config", "BLZ_THREADS must be a positive integer");
      return kExitConfig;
    }
  }

  try {
    if (sim->parsed()) {
      blz::run_simulate(load(config_path, output_dir));
    } else if (capply->parsed()) {
      blz::run_collision_apply(load(config_path, output_dir), f_path, g_path);
    } else if (meas->parsed()) {
      blz::run_measure(load(config_path, output_dir), field_path);
    } else if (ver->parsed()) {
      blz::RunConfig cfg = load(config_path, output_dir);
      if (!inequality.empty()) cfg.verify.inequality = inequality;
      if (cfg.verify.inequality.empty())
        throw blz::ConfigError("verify: no inequality id given");
      const blz::FitReport r = blz::run_verify(cfg);
      std::cout << cfg.verify.inequality << ": " << r.verdict << " ("
                << r.detail << ")\n";
    } else if (smo->parsed()) {
      blz::run_smoothing_experiment(load(config_path, output_dir));
    } else if (rep->parsed()) {
      blz::run_report(report_dir,
                      report_out.empty() ? report_dir + "/report" : report_out);
    }
  } catch (const blz::ConfigError& e) {
    print_error("config", e.what());
    return kExitConfig;
  } catch (const blz::FieldIoError& e) {
    print_error("config", e.what());
    return kExitConfig;
  } catch (const blz::VerificationFailure& e) {
    print_error("verification", e.what());
    return kExitVerification;
  } catch (const blz::NumericalFailure& e) {
    print_error("numerical", e.what());
    return kExitNumerical;
  } catch (const blz::BudgetExceeded& e) {
    print_error("numerical", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    print_error("numerical", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
