#pragma once

#include <string>

#include "blz/config.hpp"
#include "blz/veritas.hpp"

namespace blz {

/// Instantiate the configured initial datum on the configured grid.
Distribution build_initial(const VelocityGrid& grid, const InitialSection& init,
                           std::uint64_t seed);

CollisionWorkspace build_workspace(const RunConfig& cfg);

/// Each runner writes its artifacts plus a manifest (config copy, config
/// hash, artifact checksums) into cfg.run.output_dir, and throws the module
/// error types on failure (ConfigError / NumericalFailure / BudgetExceeded /
/// VerificationFailure), which the CLI maps to exit codes.
void run_simulate(const RunConfig& cfg);
void run_collision_apply(const RunConfig& cfg, const std::string& f_path,
                         const std::string& g_path);
void run_measure(const RunConfig& cfg, const std::string& field_path);
FitReport run_verify(const RunConfig& cfg);
void run_smoothing_experiment(const RunConfig& cfg);
void run_report(const std::string& manifest_dir, const std::string& out_dir);

}  // namespace blz
