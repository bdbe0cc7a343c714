#include "magbell/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace magbell {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_keys(const json& j, const char* group, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ConfigError(std::string("config: unknown key \"") + key + "\" in " + group);
  }
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for \"") + key + "\": " + e.what());
  }
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("config: ") + name + " must be positive");
  };
  positive(cfg.omega_m_GHz, "system.omega_m_GHz");
  positive(cfg.omega_ge_GHz, "system.omega_ge_GHz");
  positive(cfg.omega_ef_GHz, "system.omega_ef_GHz");
  positive(cfg.g_mq_MHz, "system.g_mq_MHz");
  positive(cfg.work_point_GHz, "system.work_point_GHz");
  positive(cfg.t1_qubit_us, "decoherence.t1_qubit_us");
  positive(cfg.t2_qubit_us, "decoherence.t2_qubit_us");
  positive(cfg.magnon_lifetime_ns, "decoherence.magnon_lifetime_ns");
  if (cfg.t2_qubit_us > 2.0 * cfg.t1_qubit_us)
    throw ConfigError("config: t2_qubit_us cannot exceed 2 * t1_qubit_us");
  if (cfg.n_thermal < 0.0)
    throw ConfigError("config: decoherence.n_thermal must be >= 0");
  if (cfg.n_max < 1) throw ConfigError("config: truncation.n_max must be >= 1");
  if (cfg.grid.alpha_points_per_axis < 1 || cfg.grid.tau_count < 1)
    throw ConfigError("config: grid point counts must be >= 1");
  if (cfg.grid.alpha_step <= 0.0) throw ConfigError("config: grid.alpha_step must be > 0");
  if (cfg.grid.tau_max_ns < cfg.grid.tau_min_ns || cfg.grid.tau_min_ns < 0.0)
    throw ConfigError("config: grid tau range must satisfy 0 <= tau_min <= tau_max");
  if (cfg.readout_eps_ground < 0.0 || cfg.readout_eps_ground >= 0.5 ||
      cfg.readout_eps_excited < 0.0 || cfg.readout_eps_excited >= 0.5)
    throw ConfigError("config: readout assignment errors must lie in [0, 0.5)");
  if (cfg.rotation_pulse_ns < 0.0 || cfg.displacement_pulse_ns < 0.0)
    throw ConfigError("config: pulse durations must be >= 0");
  if (cfg.shots && *cfg.shots < 1)
    throw ConfigError("config: tomography.shots must be >= 1 or \"exact\"");
  if (cfg.solver_max_iterations < 1)
    throw ConfigError("config: solver.max_iterations must be >= 1");
  if (!(cfg.solver_tolerance > 0.0))
    throw ConfigError("config: solver.tolerance must be > 0");
  if (cfg.bootstrap_resamples < 1)
    throw ConfigError("config: solver.bootstrap_resamples must be >= 1");
  if (cfg.work_point_GHz < cfg.omega_ge_GHz)
    throw ConfigError("config: work point below omega_ge is outside the dressed tuning range");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  require_keys(j, "top level",
               {"system", "decoherence", "truncation", "grid", "readout", "pulses",
                "tomography", "solver", "seed"});

  ExperimentConfig cfg;
  if (j.contains("system")) {
    const json& s = j["system"];
    require_keys(s, "system",
                 {"omega_m_GHz", "omega_ge_GHz", "omega_ef_GHz", "g_mq_MHz", "work_point_GHz"});
    read_into(s, "omega_m_GHz", cfg.omega_m_GHz);
    read_into(s, "omega_ge_GHz", cfg.omega_ge_GHz);
    read_into(s, "omega_ef_GHz", cfg.omega_ef_GHz);
    read_into(s, "g_mq_MHz", cfg.g_mq_MHz);
    read_into(s, "work_point_GHz", cfg.work_point_GHz);
  }
  if (j.contains("decoherence")) {
    const json& d = j["decoherence"];
    require_keys(d, "decoherence",
                 {"t1_qubit_us", "t2_qubit_us", "magnon_lifetime_ns", "n_thermal"});
    read_into(d, "t1_qubit_us", cfg.t1_qubit_us);
    read_into(d, "t2_qubit_us", cfg.t2_qubit_us);
    read_into(d, "magnon_lifetime_ns", cfg.magnon_lifetime_ns);
    read_into(d, "n_thermal", cfg.n_thermal);
  }
  if (j.contains("truncation")) {
    require_keys(j["truncation"], "truncation", {"n_max"});
    read_into(j["truncation"], "n_max", cfg.n_max);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    require_keys(g, "grid",
                 {"alpha_points_per_axis", "alpha_min", "alpha_step", "tau_min_ns",
                  "tau_max_ns", "tau_count"});
    read_into(g, "alpha_points_per_axis", cfg.grid.alpha_points_per_axis);
    read_into(g, "alpha_min", cfg.grid.alpha_min);
    read_into(g, "alpha_step", cfg.grid.alpha_step);
    read_into(g, "tau_min_ns", cfg.grid.tau_min_ns);
    read_into(g, "tau_max_ns", cfg.grid.tau_max_ns);
    read_into(g, "tau_count", cfg.grid.tau_count);
  }
  if (j.contains("readout")) {
    require_keys(j["readout"], "readout", {"eps_ground", "eps_excited"});
    read_into(j["readout"], "eps_ground", cfg.readout_eps_ground);
    read_into(j["readout"], "eps_excited", cfg.readout_eps_excited);
  }
  if (j.contains("pulses")) {
    require_keys(j["pulses"], "pulses", {"rotation_ns", "displacement_ns"});
    read_into(j["pulses"], "rotation_ns", cfg.rotation_pulse_ns);
    read_into(j["pulses"], "displacement_ns", cfg.displacement_pulse_ns);
  }
  if (j.contains("tomography")) {
    const json& t = j["tomography"];
    require_keys(t, "tomography", {"shots", "noise", "forward_model"});
    if (t.contains("shots")) {
      const json& s = t["shots"];
      if (s.is_string()) {
        if (s.get<std::string>() != "exact")
          throw ConfigError("config: tomography.shots must be a count or \"exact\"");
        cfg.shots.reset();
      } else if (s.is_number_integer()) {
        cfg.shots = s.get<long long>();
      } else {
        throw ConfigError("config: tomography.shots must be a count or \"exact\"");
      }
    }
    if (t.contains("noise")) {
      const std::string v = t["noise"].get<std::string>();
      if (v == "on")
        cfg.noise = true;
      else if (v == "off")
        cfg.noise = false;
      else
        throw ConfigError("config: tomography.noise must be \"on\" or \"off\"");
    }
    if (t.contains("forward_model")) {
      const std::string v = t["forward_model"].get<std::string>();
      if (v == "ideal")
        cfg.forward_model = NoiseModel::ideal;
      else if (v == "lindblad")
        cfg.forward_model = NoiseModel::lindblad;
      else
        throw ConfigError("config: tomography.forward_model must be \"ideal\" or \"lindblad\"");
    }
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    require_keys(s, "solver",
                 {"max_iterations", "tolerance", "weighted", "bootstrap_resamples"});
    read_into(s, "max_iterations", cfg.solver_max_iterations);
    read_into(s, "tolerance", cfg.solver_tolerance);
    read_into(s, "weighted", cfg.solver_weighted);
    read_into(s, "bootstrap_resamples", cfg.bootstrap_resamples);
  }
  read_into(j, "seed", cfg.seed);

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
  json j;
  j["system"] = {{"omega_m_GHz", cfg.omega_m_GHz},
                 {"omega_ge_GHz", cfg.omega_ge_GHz},
                 {"omega_ef_GHz", cfg.omega_ef_GHz},
                 {"g_mq_MHz", cfg.g_mq_MHz},
                 {"work_point_GHz", cfg.work_point_GHz}};
  j["decoherence"] = {{"t1_qubit_us", cfg.t1_qubit_us},
                      {"t2_qubit_us", cfg.t2_qubit_us},
                      {"magnon_lifetime_ns", cfg.magnon_lifetime_ns},
                      {"n_thermal", cfg.n_thermal}};
  j["truncation"] = {{"n_max", cfg.n_max}};
  j["grid"] = {{"alpha_points_per_axis", cfg.grid.alpha_points_per_axis},
               {"alpha_min", cfg.grid.alpha_min},
               {"alpha_step", cfg.grid.alpha_step},
               {"tau_min_ns", cfg.grid.tau_min_ns},
               {"tau_max_ns", cfg.grid.tau_max_ns},
               {"tau_count", cfg.grid.tau_count}};
  j["readout"] = {{"eps_ground", cfg.readout_eps_ground},
                  {"eps_excited", cfg.readout_eps_excited}};
  j["pulses"] = {{"rotation_ns", cfg.rotation_pulse_ns},
                 {"displacement_ns", cfg.displacement_pulse_ns}};
  if (cfg.shots)
    j["tomography"]["shots"] = *cfg.shots;
  else
    j["tomography"]["shots"] = "exact";
  j["tomography"]["noise"] = cfg.noise ? "on" : "off";
  j["tomography"]["forward_model"] =
      cfg.forward_model == NoiseModel::ideal ? "ideal" : "lindblad";
  j["solver"] = {{"max_iterations", cfg.solver_max_iterations},
                 {"tolerance", cfg.solver_tolerance},
                 {"weighted", cfg.solver_weighted},
                 {"bootstrap_resamples", cfg.bootstrap_resamples}};
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string dump = emit_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

SystemParams system_params(const ExperimentConfig& cfg) {
  SystemParams p{kTwoPi * cfg.work_point_GHz, kTwoPi * cfg.omega_m_GHz,
                 kTwoPi * cfg.g_mq_MHz * 1e-3, FockTruncation(cfg.n_max)};
  return p;
}

DecoherenceParams decoherence_params(const ExperimentConfig& cfg) {
  DecoherenceParams d;
  const double t1_ns = cfg.t1_qubit_us * 1e3;
  const double t2_ns = cfg.t2_qubit_us * 1e3;
  d.gamma1_q = 1.0 / t1_ns;
  d.gamma_phi_q = 1.0 / t2_ns - 0.5 / t1_ns;
  d.kappa_m = 1.0 / cfg.magnon_lifetime_ns;
  d.n_thermal = cfg.n_thermal;
  d.validate();
  return d;
}

FockTruncation truncation(const ExperimentConfig& cfg) { return FockTruncation(cfg.n_max); }

SettingGrid setting_grid(const ExperimentConfig& cfg) {
  return SettingGrid::custom(cfg.grid.alpha_points_per_axis, cfg.grid.alpha_min,
                             cfg.grid.alpha_step, cfg.grid.tau_min_ns, cfg.grid.tau_max_ns,
                             cfg.grid.tau_count);
}

ReadoutError readout_error(const ExperimentConfig& cfg) {
  return {cfg.readout_eps_ground, cfg.readout_eps_excited};
}

PulseTimings pulse_timings(const ExperimentConfig& cfg) {
  return {cfg.rotation_pulse_ns, cfg.displacement_pulse_ns};
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  return {cfg.solver_max_iterations, cfg.solver_tolerance, cfg.solver_weighted};
}

double work_point_rabi(const ExperimentConfig& cfg) {
  return 2.0 * kTwoPi * (cfg.work_point_GHz - cfg.omega_ge_GHz);
}

}  // namespace magbell
