#pragma once

#include "magbell/reconstruction.hpp"
#include "magbell/sequences.hpp"
#include "magbell/tomography.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace magbell {

/// Measurement-grid shape; alpha values are laid out row by row (imaginary
/// part ascending, then real part ascending).
struct GridConfig {
  int alpha_points_per_axis = 8;
  double alpha_min = -0.875;
  double alpha_step = 0.25;
  double tau_min_ns = 0.0;
  double tau_max_ns = 180.0;
  int tau_count = 61;
};

/// Full experiment description. Frequencies are entered in GHz/MHz and
/// lifetimes in microseconds/nanoseconds, exactly as quoted on the device;
/// conversion to angular units happens once, in the accessors below.
struct ExperimentConfig {
  // system
  double omega_m_GHz = 5.927;
  double omega_ge_GHz = 5.847;
  double omega_ef_GHz = 5.493;
  double g_mq_MHz = 5.59;
  double work_point_GHz = 5.867;

  // decoherence
  double t1_qubit_us = 8.0;
  double t2_qubit_us = 1.0;
  double magnon_lifetime_ns = 250.0;
  double n_thermal = 0.0;

  int n_max = 10;
  GridConfig grid;

  // readout assignment errors
  double readout_eps_ground = 0.0;
  double readout_eps_excited = 0.0;

  // finite pulse durations (decoherence-only padding when noise is on)
  double rotation_pulse_ns = 0.0;
  double displacement_pulse_ns = 0.0;

  // tomography run
  std::optional<long long> shots = 1000;  // nullopt = exact expectations
  bool noise = true;
  NoiseModel forward_model = NoiseModel::lindblad;

  // solver
  int solver_max_iterations = 20000;
  double solver_tolerance = 1e-9;
  bool solver_weighted = false;
  int bootstrap_resamples = 20;

  std::uint64_t seed = 1;
};

/// Throws ConfigError on out-of-range or inconsistent values.
void validate(const ExperimentConfig& cfg);

/// Parse from JSON text; missing groups fall back to defaults, unknown keys
/// are rejected. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);

/// Read and parse a config file. Throws IoError / ConfigError.
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON emission; parse(emit(cfg)) reproduces cfg exactly.
std::string emit_config(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical emission, as fixed-width hex.
std::string config_hash(const ExperimentConfig& cfg);

// Converted views (angular frequencies in rad/ns, rates in 1/ns).
SystemParams system_params(const ExperimentConfig& cfg);
DecoherenceParams decoherence_params(const ExperimentConfig& cfg);
FockTruncation truncation(const ExperimentConfig& cfg);
SettingGrid setting_grid(const ExperimentConfig& cfg);
ReadoutError readout_error(const ExperimentConfig& cfg);
PulseTimings pulse_timings(const ExperimentConfig& cfg);
SolverOptions solver_options(const ExperimentConfig& cfg);

/// Rabi rate of the dressing drive that parks the effective qubit frequency
/// at the configured work point (rad/ns).
double work_point_rabi(const ExperimentConfig& cfg);

}  // namespace magbell
