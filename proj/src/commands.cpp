#include "magbell/commands.hpp"

#include "magbell/curve_fit.hpp"
#include "magbell/io.hpp"
#include "magbell/svg.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

namespace magbell {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void ensure_dir(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

RunManifest manifest_for(const char* command, const ExperimentConfig& cfg,
                         std::vector<std::string> outputs) {
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(cfg);
  m.seed = cfg.seed;
  m.outputs = std::move(outputs);
  return m;
}

SequenceEngine make_engine(const ExperimentConfig& cfg) {
  return SequenceEngine(system_params(cfg), decoherence_params(cfg), pulse_timings(cfg));
}

std::vector<std::string> joint_labels(int count) {
  std::vector<std::string> labels;
  for (int k = 0; k < count; ++k)
    labels.push_back("|" + std::to_string(k / 2) + (k % 2 ? ",+>" : ",g>"));
  return labels;
}

}  // namespace

int cmd_swap(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const SequenceEngine engine = make_engine(cfg);
  const SettingGrid grid = setting_grid(cfg);
  const auto curve = engine.swap_oscillation_curve(grid.taus, cfg.noise);
  const DampedCosineFit fit = fit_damped_cosine(curve);

  std::printf("swap oscillation (%s)\n", cfg.noise ? "noisy" : "noiseless");
  std::printf("  fitted frequency : %.6f MHz\n", fit.frequency * 1e3);
  std::printf("  fitted decay rate: %.6g /ns\n", fit.decay_rate);
  std::printf("  rms residual     : %.3g\n", fit.rms_residual);

  const std::string table = join(out_dir, "swap_curve.txt");
  const std::string plot = join(out_dir, "swap_curve.svg");
  write_table(table, "tau_ns p_plus", curve);
  write_line_plot(plot, "Qubit-magnon swap oscillation", "swap time (ns)", "P(+)",
                  {{cfg.noise ? "noisy" : "noiseless", "#4878a8", curve, true}});
  write_manifest(join(out_dir, "swap_manifest.json"),
                 manifest_for("swap", cfg, {table, plot}));
  return kExitOk;
}

int cmd_purity(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const SequenceEngine engine = make_engine(cfg);
  const SettingGrid grid = setting_grid(cfg);
  const auto curve = engine.purity_experiment(grid.taus, cfg.noise);

  double min_p = curve.front().second, min_tau = curve.front().first;
  for (const auto& [tau, p] : curve)
    if (p < min_p) {
      min_p = p;
      min_tau = tau;
    }
  std::printf("qubit purity vs swap time (%s)\n", cfg.noise ? "noisy" : "noiseless");
  std::printf("  minimum purity   : %.6f at %.3f ns\n", min_p, min_tau);

  const std::string table = join(out_dir, "purity_curve.txt");
  const std::string plot = join(out_dir, "purity_curve.svg");
  write_table(table, "tau_ns qubit_purity", curve);
  write_line_plot(plot, "Qubit purity across the swap", "swap time (ns)", "Tr(rho_q^2)",
                  {{cfg.noise ? "noisy" : "noiseless", "#b85450", curve, true}});
  write_manifest(join(out_dir, "purity_manifest.json"),
                 manifest_for("purity", cfg, {table, plot}));
  return kExitOk;
}

int cmd_crossing(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const SequenceEngine engine = make_engine(cfg);
  const SystemParams sys = system_params(cfg);
  const int points = 121;
  std::vector<double> sweep =
      linspace(sys.omega_m - 6.0 * sys.g_mq, sys.omega_m + 6.0 * sys.g_mq, points);
  const auto spectrum = engine.avoided_crossing(sweep);

  double min_split = -1.0, min_wq = 0.0;
  std::vector<PlotSeries> series(2);
  series[0] = {"lower branch", "#4878a8", {}, false};
  series[1] = {"upper branch", "#b85450", {}, false};
  std::string table_text = "# omega_q_GHz lower_MHz upper_MHz\n";
  for (const auto& [wq, branches] : spectrum) {
    const double lo_mhz = branches.first / kTwoPi * 1e3;
    const double hi_mhz = branches.second / kTwoPi * 1e3;
    const double wq_ghz = wq / kTwoPi;
    series[0].points.push_back({wq_ghz, lo_mhz});
    series[1].points.push_back({wq_ghz, hi_mhz});
    char line[128];
    std::snprintf(line, sizeof(line), "%.9f %.6f %.6f\n", wq_ghz, lo_mhz, hi_mhz);
    table_text += line;
    const double split = branches.second - branches.first;
    if (min_split < 0.0 || split < min_split) {
      min_split = split;
      min_wq = wq;
    }
  }
  std::printf("avoided crossing of the dressed qubit and the magnon mode\n");
  std::printf("  minimal splitting: %.6f MHz at omega_q/2pi = %.6f GHz\n",
              min_split / kTwoPi * 1e3, min_wq / kTwoPi);

  const std::string table = join(out_dir, "crossing_spectrum.txt");
  const std::string plot = join(out_dir, "crossing_spectrum.svg");
  write_text_file(table, table_text);
  write_line_plot(plot, "Normal-mode splitting near resonance", "omega_q/2pi (GHz)",
                  "mode frequency (MHz, frame of the magnon)", series);
  write_manifest(join(out_dir, "crossing_manifest.json"),
                 manifest_for("crossing", cfg, {table, plot}));
  return kExitOk;
}

int cmd_generate(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const SequenceEngine engine = make_engine(cfg);
  const DensityMatrix rho = engine.generate_bell(cfg.noise);
  const double f_gen = fidelity(rho, bell_state(truncation(cfg)));

  const NoiseModel truth = cfg.noise ? NoiseModel::lindblad : NoiseModel::ideal;
  const ForwardModel model(system_params(cfg), decoherence_params(cfg), setting_grid(cfg),
                           truth, /*keep_propagators=*/true);
  const auto records = simulate_dataset(rho, model, cfg.shots, cfg.seed, readout_error(cfg));

  std::printf("generated Bell-protocol dataset\n");
  std::printf("  prepared-state fidelity: %.6f\n", f_gen);
  std::printf("  records               : %zu\n", records.size());
  if (cfg.shots)
    std::printf("  shots per setting     : %lld\n", static_cast<long long>(*cfg.shots));
  else
    std::printf("  shots per setting     : exact\n");

  const std::string dataset = join(out_dir, "dataset.txt");
  write_dataset(dataset, records);
  write_manifest(join(out_dir, "generate_manifest.json"),
                 manifest_for("generate", cfg, {dataset}));
  return kExitOk;
}

int cmd_reconstruct(const std::string& dataset_path, const ExperimentConfig& cfg,
                    const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto records = read_dataset(dataset_path);
  const ForwardModel model(system_params(cfg), decoherence_params(cfg), setting_grid(cfg),
                           cfg.forward_model, /*keep_propagators=*/false);
  const DesignMatrix design(model);
  const SolverOptions opts = solver_options(cfg);
  const ReconstructionResult result = reconstruct(records, design, opts);

  bool finite_shots = true;
  for (const auto& r : records) finite_shots = finite_shots && r.shots.has_value();
  BootstrapResult boot;
  if (finite_shots)
    boot = bootstrap_error(records, design, opts, cfg.bootstrap_resamples, cfg.seed);

  char report[512];
  int n = std::snprintf(report, sizeof(report),
                        "records        %zu\n"
                        "fidelity       %.6f\n"
                        "purity_qubit   %.6f\n"
                        "residual_rms   %.6g\n"
                        "iterations     %d\n"
                        "converged      %s\n",
                        records.size(), result.fidelity, result.purity_qubit,
                        result.residual, result.iterations,
                        result.converged ? "yes" : "no");
  if (finite_shots && boot.valid)
    std::snprintf(report + n, sizeof(report) - n, "fidelity_sigma %.6f\n", boot.sigma);
  std::fputs(report, stdout);
  if (finite_shots && boot.valid)
    std::printf("fidelity with error bar: %.3f +/- %.3f\n", result.fidelity, boot.sigma);

  const std::string state_path = join(out_dir, "rho_hat.txt");
  const std::string report_path = join(out_dir, "reconstruct_report.txt");
  write_state(state_path, result.rho_hat);
  write_text_file(report_path, report);

  // displayed sub-block: magnon levels n <= 3
  const int db = std::min<int>(8, model.dim());
  const Mat shown = result.rho_hat.entries().block(0, 0, db, db);
  const PureState bell = bell_state(model.truncation());
  const Mat target_full = bell.amplitudes() * bell.amplitudes().adjoint();
  const Mat target = target_full.block(0, 0, db, db);
  const auto labels = joint_labels(db);
  const std::string plot_re = join(out_dir, "rho_real.svg");
  const std::string plot_im = join(out_dir, "rho_imag.svg");
  write_matrix_bars(plot_re, "Re(rho), reconstructed vs target outline", shown.real(),
                    target.real(), labels);
  write_matrix_bars(plot_im, "Im(rho), reconstructed vs target outline", shown.imag(),
                    target.imag(), labels);
  write_manifest(join(out_dir, "reconstruct_manifest.json"),
                 manifest_for("reconstruct", cfg,
                              {state_path, report_path, plot_re, plot_im}));

  if (!result.converged) {
    std::fprintf(stderr,
                 "reconstruction did not reach the gradient-map tolerance "
                 "(%d iterations, grad-map norm %.3g)\n",
                 result.iterations, result.grad_map_norm);
    return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_sweep_truncation(const ExperimentConfig& cfg, const std::vector<int>& n_max_list,
                         const std::string& out_dir) {
  ensure_dir(out_dir);
  const SettingGrid grid = setting_grid(cfg);
  Complex corner = grid.alphas.front();
  for (Complex a : grid.alphas)
    if (std::abs(a) > std::abs(corner)) corner = a;

  std::string table_text = "# n_max bell_fidelity corner_tail_weight sufficient\n";
  std::printf("truncation sweep (corner displacement |alpha| = %.4f)\n", std::abs(corner));
  for (int n : n_max_list) {
    if (n < 1) throw ConfigError("sweep-truncation: n_max values must be >= 1");
    ExperimentConfig local = cfg;
    local.n_max = n;
    const SequenceEngine engine = make_engine(local);
    const DensityMatrix rho = engine.generate_bell(cfg.noise);
    const double f = fidelity(rho, bell_state(FockTruncation(n)));
    const double tail = coherent_tail_weight(corner, n);
    const bool ok = tail < 1e-6;
    char line[128];
    std::snprintf(line, sizeof(line), "%d %.9f %.6e %s\n", n, f, tail, ok ? "yes" : "no");
    table_text += line;
    std::printf("  n_max=%-3d fidelity=%.9f tail=%.3e %s\n", n, f, tail,
                ok ? "" : "insufficient for this grid");
  }

  const std::string table = join(out_dir, "truncation_sweep.txt");
  write_text_file(table, table_text);
  write_manifest(join(out_dir, "truncation_manifest.json"),
                 manifest_for("sweep-truncation", cfg, {table}));
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Simulation and tomographic reconstruction of deterministic "
               "qubit-magnon Bell states"};
  app.footer("Worker threads are controlled by the MAGBELL_WORKERS environment variable.");
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", shots_text, noise_text, model_text;
  std::uint64_t seed = 0;
  bool seed_set = false;

  app.add_option("--config", config_path, "Path to a JSON config file");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Master RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--shots", shots_text, "Shots per setting, or \"exact\"");
  app.add_option("--noise", noise_text, "Decoherence during generation: on|off");
  app.add_option("--forward-model", model_text,
                 "Reconstruction measurement model: ideal|lindblad");

  auto* swap = app.add_subcommand("swap", "Swap-oscillation curve P(+) vs swap time");
  auto* purity = app.add_subcommand("purity", "Qubit purity across the swap");
  auto* crossing = app.add_subcommand("crossing", "Avoided-crossing spectrum");
  auto* generate = app.add_subcommand("generate", "Bell state + synthetic tomography dataset");
  auto* reconstruct_cmd =
      app.add_subcommand("reconstruct", "Density-matrix reconstruction from a dataset");
  std::string dataset_path;
  reconstruct_cmd->add_option("dataset", dataset_path, "Dataset file")->required();
  auto* sweep = app.add_subcommand("sweep-truncation", "Fock-truncation convergence table");
  std::vector<int> n_list{1, 2, 4, 6, 8, 10, 12};
  sweep->add_option("--n-max", n_list, "Truncation levels to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed_set) cfg.seed = seed;
    if (!shots_text.empty()) {
      if (shots_text == "exact") {
        cfg.shots.reset();
      } else {
        try {
          cfg.shots = std::stoll(shots_text);
        } catch (const std::exception&) {
          throw ConfigError("--shots expects a positive count or \"exact\"");
        }
      }
    }
    if (!noise_text.empty()) {
      if (noise_text != "on" && noise_text != "off")
        throw ConfigError("--noise expects on|off");
      cfg.noise = noise_text == "on";
    }
    if (!model_text.empty()) {
      if (model_text == "ideal")
        cfg.forward_model = NoiseModel::ideal;
      else if (model_text == "lindblad")
        cfg.forward_model = NoiseModel::lindblad;
      else
        throw ConfigError("--forward-model expects ideal|lindblad");
    }
    validate(cfg);

    if (swap->parsed()) return cmd_swap(cfg, out_dir);
    if (purity->parsed()) return cmd_purity(cfg, out_dir);
    if (crossing->parsed()) return cmd_crossing(cfg, out_dir);
    if (generate->parsed()) return cmd_generate(cfg, out_dir);
    if (reconstruct_cmd->parsed()) return cmd_reconstruct(dataset_path, cfg, out_dir);
    if (sweep->parsed()) return cmd_sweep_truncation(cfg, n_list, out_dir);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace magbell
