#include <doctest.h>

#include "magbell/commands.hpp"
#include "magbell/curve_fit.hpp"
#include "magbell/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace magbell;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    std::mt19937_64 rng(std::random_device{}());
    path = std::filesystem::temp_directory_path() /
           ("magbell_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::pair<double, double>> parse_table(const std::string& text) {
  std::vector<std::pair<double, double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x, y;
    REQUIRE((ls >> x >> y));
    rows.emplace_back(x, y);
  }
  return rows;
}

double table_value_at(const std::vector<std::pair<double, double>>& rows, double x) {
  for (const auto& [xi, yi] : rows)
    if (std::abs(xi - x) < 1e-9) return yi;
  FAIL("no table row at x = " << x);
  return 0.0;
}

double argmin_x(const std::vector<std::pair<double, double>>& rows) {
  double best_x = rows.front().first, best_y = rows.front().second;
  for (const auto& [x, y] : rows)
    if (y < best_y) {
      best_y = y;
      best_x = x;
    }
  return best_x;
}

// report files are "key value" lines
double report_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string k;
  double v;
  while (in >> k >> v)
    if (k == key) return v;
  FAIL("report key not found: " << key);
  return 0.0;
}

std::string report_token(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string k, v;
  while (in >> k >> v)
    if (k == key) return v;
  FAIL("report key not found: " << key);
  return {};
}

int run(std::vector<const char*> args) {
  return run_cli(static_cast<int>(args.size()), args.data());
}

}  // namespace

TEST_SUITE("cli-io") {

TEST_CASE("default config emission is a parse fixpoint") {
  const ExperimentConfig def;
  const std::string text = emit_config(def);
  const ExperimentConfig back = parse_config(text);
  CHECK(emit_config(back) == text);
  CHECK(config_hash(back) == config_hash(def));

  CHECK(back.omega_m_GHz == 5.927);
  CHECK(back.omega_ge_GHz == 5.847);
  CHECK(back.omega_ef_GHz == 5.493);
  CHECK(back.g_mq_MHz == 5.59);
  CHECK(back.work_point_GHz == 5.867);
  CHECK(back.n_max == 10);
  REQUIRE(back.shots.has_value());
  CHECK(*back.shots == 1000);
  CHECK(back.noise);
  CHECK(back.forward_model == NoiseModel::lindblad);
  CHECK(back.solver_max_iterations == 20000);
  CHECK(back.solver_tolerance == 1e-9);
  CHECK(back.bootstrap_resamples == 20);
  CHECK(back.seed == 1);
  CHECK(setting_grid(back).size() == 11712);
}

TEST_CASE("config groups override defaults and units convert once") {
  const std::string text = R"({
    "system": {"work_point_GHz": 5.907},
    "truncation": {"n_max": 4},
    "grid": {"tau_count": 5},
    "tomography": {"shots": "exact", "noise": "off", "forward_model": "ideal"},
    "solver": {"max_iterations": 50, "bootstrap_resamples": 3},
    "seed": 42
  })";
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.work_point_GHz == 5.907);
  CHECK(cfg.omega_m_GHz == 5.927);  // untouched group keeps defaults
  CHECK(cfg.n_max == 4);
  CHECK(cfg.grid.tau_count == 5);
  CHECK(!cfg.shots.has_value());
  CHECK(!cfg.noise);
  CHECK(cfg.forward_model == NoiseModel::ideal);
  CHECK(cfg.solver_max_iterations == 50);
  CHECK(cfg.bootstrap_resamples == 3);
  CHECK(cfg.seed == 42);

  const ExperimentConfig def;
  const SystemParams sys = system_params(def);
  CHECK(sys.omega_m == doctest::Approx(kTwoPi * 5.927).epsilon(1e-15));
  CHECK(sys.omega_q == doctest::Approx(kTwoPi * 5.867).epsilon(1e-15));
  CHECK(sys.g_mq == doctest::Approx(kTwoPi * 0.00559).epsilon(1e-15));
  CHECK(sys.trunc.n_max == 10);

  const DecoherenceParams dec = decoherence_params(def);
  CHECK(dec.gamma1_q == doctest::Approx(1.0 / 8000.0).epsilon(1e-15));
  CHECK(dec.gamma_phi_q == doctest::Approx(0.0009375).epsilon(1e-15));
  CHECK(dec.kappa_m == doctest::Approx(0.004).epsilon(1e-15));
  CHECK(dec.n_thermal == 0.0);

  CHECK(work_point_rabi(def) == doctest::Approx(kTwoPi * 0.04).epsilon(1e-12));

  const SettingGrid grid = setting_grid(def);
  CHECK(grid.alphas.size() == 64);
  CHECK(grid.taus.size() == 61);
  CHECK(grid.alphas.front() == Complex(-0.875, -0.875));
  CHECK(grid.alphas.back() == Complex(0.875, 0.875));
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"system": {"omega_q_GHz": 5.9}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"truncation": {"n_max": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"decoherence": {"t1_qubit_us": 8.0, "t2_qubit_us": 20.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"readout": {"eps_ground": 0.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"tau_min_ns": 10.0, "tau_max_ns": 5.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"system": {"work_point_GHz": 5.8}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tomography": {"shots": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tomography": {"shots": "most"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tomography": {"noise": "maybe"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tomography": {"forward_model": "magic"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"tolerance": 0.0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"bootstrap_resamples": 0}})"), ConfigError);
}

TEST_CASE("missing config file is an i/o failure") {
  CHECK_THROWS_AS(load_config("/nonexistent/magbell.json"), IoError);
}

TEST_CASE("dataset text round trip is exact") {
  std::vector<MeasurementRecord> records;
  MeasurementRecord a;
  a.setting = {RotationLabel::I, Complex(-0.875, 0.125), 1.0 / 3.0};
  a.e_value = 0.1234567890123456789;
  a.shots = 1000;
  MeasurementRecord b;
  b.setting = {RotationLabel::Rx_half, Complex(0.0, 0.0), 180.0};
  b.e_value = 1e-17;
  b.shots.reset();
  MeasurementRecord c;
  c.setting = {RotationLabel::Ry_half, Complex(0.625, -0.375), 22.361358614481127};
  c.e_value = 0.5;
  c.shots = 7;
  records = {a, b, c};

  const std::string text = dataset_to_text(records);
  const auto back = parse_dataset(text);
  REQUIRE(back.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].setting.rotation == records[i].setting.rotation);
    CHECK(back[i].setting.alpha == records[i].setting.alpha);
    CHECK(back[i].setting.tau == records[i].setting.tau);
    CHECK(back[i].e_value == records[i].e_value);
    CHECK(back[i].shots == records[i].shots);
  }
  CHECK(dataset_to_text(back) == text);

  TempDir tmp;
  write_dataset(tmp.sub("d.txt"), records);
  const auto from_file = read_dataset(tmp.sub("d.txt"));
  CHECK(dataset_to_text(from_file) == text);
}

TEST_CASE("malformed datasets are rejected") {
  CHECK_THROWS_AS(parse_dataset(""), IoError);
  CHECK_THROWS_AS(parse_dataset("# wrong header\nI 0 0 0 0.5 inf\n"), IoError);
  const std::string hdr = "# dataset-format v1\n";
  CHECK_THROWS_AS(parse_dataset(hdr + "I 0 0 0 0.5\n"), IoError);          // missing field
  CHECK_THROWS_AS(parse_dataset(hdr + "I 0 0 0 0.5 inf extra\n"), IoError);
  CHECK_THROWS_AS(parse_dataset(hdr + "Rz90 0 0 0 0.5 inf\n"), IoError);   // unknown rotation
  CHECK_THROWS_AS(parse_dataset(hdr + "I x 0 0 0.5 inf\n"), IoError);
  CHECK_THROWS_AS(parse_dataset(hdr + "I 0 0 0 0.5 -3\n"), IoError);
  CHECK_THROWS_AS(read_dataset("/nonexistent/dataset.txt"), IoError);
}

TEST_CASE("state files round trip bit for bit") {
  const DensityMatrix rho =
      DensityMatrix::from_pure(bell_state(FockTruncation{1}));
  const std::string text = state_to_text(rho);
  const DensityMatrix back = parse_state(text);
  CHECK(back.dim() == 4);
  CHECK((back.entries() - rho.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(state_to_text(back) == text);

  TempDir tmp;
  write_state(tmp.sub("rho.txt"), rho);
  CHECK(state_to_text(read_state(tmp.sub("rho.txt"))) == text);

  CHECK_THROWS_AS(parse_state("garbage"), IoError);
  CHECK_THROWS_AS(parse_state("# state-format v1\ndim 1\n"), IoError);
  CHECK_THROWS_AS(parse_state("# state-format v1\ndim 2\nbasis other\n1 0 0 0\n0 0 0 0\n"),
                  IoError);
  const std::string tag = "magnon-major;qubit=g,+";
  // trace 2: structurally fine, physically invalid
  CHECK_THROWS_AS(parse_state("# state-format v1\ndim 2\nbasis " + tag +
                              "\n1 0 0 0\n0 0 1 0\n"),
                  IoError);
  // truncated rows
  CHECK_THROWS_AS(parse_state("# state-format v1\ndim 2\nbasis " + tag + "\n1 0 0 0\n"),
                  IoError);
}

TEST_CASE("table writer emits a comment header and exact values") {
  TempDir tmp;
  const std::vector<std::pair<double, double>> rows = {{0.0, 1.0}, {1.0 / 3.0, 0.25}};
  write_table(tmp.sub("t.txt"), "x y", rows);
  const std::string text = read_text_file(tmp.sub("t.txt"));
  CHECK(text.rfind("# x y\n", 0) == 0);
  const auto back = parse_table(text);
  REQUIRE(back.size() == 2);
  CHECK(back[1].first == 1.0 / 3.0);
  CHECK(back[1].second == 0.25);
}

TEST_CASE("manifests record provenance") {
  TempDir tmp;
  RunManifest m;
  m.command = "swap";
  m.config_hash = config_hash(ExperimentConfig{});
  m.seed = 17;
  m.outputs = {"a.txt", "b.svg"};
  write_manifest(tmp.sub("m.json"), m);

  const auto j = nlohmann::json::parse(read_text_file(tmp.sub("m.json")));
  CHECK(j.at("command") == "swap");
  CHECK(j.at("config_hash") == config_hash(ExperimentConfig{}));
  CHECK(j.at("seed") == 17);
  CHECK(j.at("toolkit_version") == std::string(kToolkitVersion));
  CHECK(j.at("outputs").size() == 2);
  const std::string ts = j.at("created_utc");
  REQUIRE(ts.size() == 20);  // YYYY-MM-DDTHH:MM:SSZ
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}

TEST_CASE("swap command reproduces the doubled coupling rate") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 4;
  cfg.noise = false;
  REQUIRE(cmd_swap(cfg, tmp.sub("out")) == kExitOk);

  const auto curve = parse_table(read_text_file(tmp.sub("out/swap_curve.txt")));
  REQUIRE(curve.size() == 61);
  CHECK(curve.front().first == 0.0);
  CHECK(curve.front().second == doctest::Approx(1.0).epsilon(1e-12));

  const DampedCosineFit fit = fit_damped_cosine(curve);
  CHECK(fit.frequency * 1e3 == doctest::Approx(11.18).epsilon(0.01));

  const std::string svg = read_text_file(tmp.sub("out/swap_curve.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  const auto j = nlohmann::json::parse(read_text_file(tmp.sub("out/swap_manifest.json")));
  CHECK(j.at("command") == "swap");
  CHECK(j.at("outputs").size() == 2);
}

TEST_CASE("noisy swap curve decays") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 3;
  cfg.noise = true;
  REQUIRE(cmd_swap(cfg, tmp.sub("out")) == kExitOk);
  const auto curve = parse_table(read_text_file(tmp.sub("out/swap_curve.txt")));
  const DampedCosineFit fit = fit_damped_cosine(curve);
  CHECK(fit.decay_rate > 0.0);
}

TEST_CASE("purity command finds the entanglement dip") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 4;
  cfg.noise = false;
  REQUIRE(cmd_purity(cfg, tmp.sub("out")) == kExitOk);

  const auto curve = parse_table(read_text_file(tmp.sub("out/purity_curve.txt")));
  REQUIRE(curve.size() == 61);
  double min_p = 1.0;
  for (const auto& [tau, p] : curve) min_p = std::min(min_p, p);
  CHECK(min_p == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(table_value_at(curve, 45.0) >= 0.999);  // full swap restores purity
}

TEST_CASE("decoherence shifts the purity dip by at most a few ns") {
  // a fine tau window isolating the first dip; the default 3 ns grid samples
  // four near-degenerate dips and the argmin hops between them
  ExperimentConfig cfg;
  cfg.n_max = 2;
  cfg.grid.tau_min_ns = 0.0;
  cfg.grid.tau_max_ns = 45.0;
  cfg.grid.tau_count = 181;

  TempDir tmp;
  cfg.noise = false;
  REQUIRE(cmd_purity(cfg, tmp.sub("off")) == kExitOk);
  cfg.noise = true;
  REQUIRE(cmd_purity(cfg, tmp.sub("on")) == kExitOk);

  const double t_off = argmin_x(parse_table(read_text_file(tmp.sub("off/purity_curve.txt"))));
  const double t_on = argmin_x(parse_table(read_text_file(tmp.sub("on/purity_curve.txt"))));
  CHECK(t_off == doctest::Approx(22.36).epsilon(0.02));
  CHECK(std::abs(t_on - t_off) <= 3.0);
}

TEST_CASE("crossing command emits the normal-mode spectrum") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 1;
  REQUIRE(cmd_crossing(cfg, tmp.sub("out")) == kExitOk);

  struct Row {
    double wq, lo, hi;
  };
  std::vector<Row> rows;
  std::istringstream in(read_text_file(tmp.sub("out/crossing_spectrum.txt")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Row r;
    REQUIRE((ls >> r.wq >> r.lo >> r.hi));
    rows.push_back(r);
  }
  REQUIRE(rows.size() == 121);

  double min_split = 1e300, min_wq = 0.0;
  for (const auto& r : rows)
    if (r.hi - r.lo < min_split) {
      min_split = r.hi - r.lo;
      min_wq = r.wq;
    }
  CHECK(min_split == doctest::Approx(2.0 * 5.59).epsilon(0.01));
  CHECK(min_wq == doctest::Approx(5.927).epsilon(1e-9));

  // branch slopes flatten toward +-1/2 away from resonance
  auto slope = [&](const std::vector<Row>& rs, int i, int j, bool upper) {
    const double dy = upper ? rs[j].hi - rs[i].hi : rs[j].lo - rs[i].lo;
    return dy / ((rs[j].wq - rs[i].wq) * 1e3);
  };
  const double edge_up = slope(rows, 117, 120, true);
  const double edge_lo = slope(rows, 117, 120, false);
  const double mid_up = slope(rows, 73, 76, true);
  CHECK(edge_up == doctest::Approx(0.5).epsilon(0.1));
  CHECK(edge_lo == doctest::Approx(-0.5).epsilon(0.1));
  CHECK(std::abs(edge_up - 0.5) < std::abs(mid_up - 0.5));
}

TEST_CASE("generate command writes the identity-setting expectation") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 3;
  cfg.noise = false;
  cfg.shots.reset();
  cfg.grid = {3, -0.25, 0.25, 0.0, 0.0, 1};  // contains alpha = 0
  REQUIRE(cmd_generate(cfg, tmp.sub("out")) == kExitOk);

  const auto records = read_dataset(tmp.sub("out/dataset.txt"));
  REQUIRE(records.size() == 27);
  const SettingGrid grid = setting_grid(cfg);
  const auto& rec = records[grid.flat_index(0, 4, 0)];
  CHECK(rec.setting.rotation == RotationLabel::I);
  CHECK(rec.setting.alpha == Complex(0.0, 0.0));
  CHECK(rec.setting.tau == 0.0);
  CHECK(rec.exact());
  CHECK(rec.e_value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("generate command covers the full standard grid") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 3;
  cfg.noise = false;
  cfg.shots.reset();
  REQUIRE(cmd_generate(cfg, tmp.sub("out")) == kExitOk);
  CHECK(read_dataset(tmp.sub("out/dataset.txt")).size() == 11712);
}

TEST_CASE("generate command is seed-deterministic") {
  ExperimentConfig cfg;
  cfg.n_max = 2;
  cfg.noise = false;
  cfg.shots = 200;
  cfg.grid = {3, -0.25, 0.25, 0.0, 0.0, 1};

  TempDir tmp;
  cfg.seed = 5;
  REQUIRE(cmd_generate(cfg, tmp.sub("a")) == kExitOk);
  REQUIRE(cmd_generate(cfg, tmp.sub("b")) == kExitOk);
  cfg.seed = 6;
  REQUIRE(cmd_generate(cfg, tmp.sub("c")) == kExitOk);

  const std::string da = read_text_file(tmp.sub("a/dataset.txt"));
  const std::string db = read_text_file(tmp.sub("b/dataset.txt"));
  const std::string dc = read_text_file(tmp.sub("c/dataset.txt"));
  CHECK(da == db);
  CHECK(da != dc);
}

TEST_CASE("reconstruct command round-trips an exact dataset") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 3;
  cfg.noise = false;
  cfg.shots.reset();
  cfg.forward_model = NoiseModel::ideal;
  REQUIRE(cmd_generate(cfg, tmp.sub("gen")) == kExitOk);
  REQUIRE(cmd_reconstruct(tmp.sub("gen/dataset.txt"), cfg, tmp.sub("rec")) == kExitOk);

  const std::string report = read_text_file(tmp.sub("rec/reconstruct_report.txt"));
  CHECK(report_value(report, "records") == 11712);
  CHECK(report_value(report, "fidelity") >= 0.999);
  CHECK(report_value(report, "purity_qubit") == doctest::Approx(0.5).epsilon(0.02));
  CHECK(report_token(report, "converged") == "yes");
  CHECK(report.find("fidelity_sigma") == std::string::npos);  // exact data: no bootstrap

  const DensityMatrix rho = read_state(tmp.sub("rec/rho_hat.txt"));
  CHECK(rho.dim() == 8);
  CHECK(fidelity(rho, bell_state(FockTruncation{3})) >= 0.999);

  const std::string svg = read_text_file(tmp.sub("rec/rho_real.svg"));
  CHECK(svg.find("stroke-dasharray") != std::string::npos);  // target outline
  CHECK(svg.find("|0,+&gt;") != std::string::npos);          // basis labels
  CHECK(read_text_file(tmp.sub("rec/rho_imag.svg")).find("<svg") != std::string::npos);

  const auto j = nlohmann::json::parse(read_text_file(tmp.sub("rec/reconstruct_manifest.json")));
  CHECK(j.at("command") == "reconstruct");
  CHECK(j.at("outputs").size() == 4);
}

TEST_CASE("reconstruct command signals non-convergence distinctly") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.n_max = 3;
  cfg.noise = false;
  cfg.shots = 100;
  cfg.seed = 7;
  cfg.forward_model = NoiseModel::ideal;
  REQUIRE(cmd_generate(cfg, tmp.sub("gen")) == kExitOk);

  cfg.solver_max_iterations = 50;  // far too few for the 1e-9 gradient-map target
  cfg.bootstrap_resamples = 2;
  const int code = cmd_reconstruct(tmp.sub("gen/dataset.txt"), cfg, tmp.sub("rec"));
  CHECK(code == kExitNonConvergence);

  const std::string report = read_text_file(tmp.sub("rec/reconstruct_report.txt"));
  CHECK(report_token(report, "converged") == "no");
  CHECK(report_value(report, "iterations") == 50);
  CHECK(report.find("fidelity_sigma") != std::string::npos);  // sampled data: error bar
}

TEST_CASE("truncation sweep flags insufficient cutoffs") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.noise = false;
  REQUIRE(cmd_sweep_truncation(cfg, {1, 2, 4, 6, 8, 10, 12}, tmp.sub("out")) == kExitOk);

  struct Row {
    int n;
    double fid, tail;
    std::string ok;
  };
  std::vector<Row> rows;
  std::istringstream in(read_text_file(tmp.sub("out/truncation_sweep.txt")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Row r;
    REQUIRE((ls >> r.n >> r.fid >> r.tail >> r.ok));
    rows.push_back(r);
  }
  REQUIRE(rows.size() == 7);

  double f8 = 0.0, f12 = 0.0;
  for (const auto& r : rows) {
    if (r.n == 8) f8 = r.fid;
    if (r.n == 12) f12 = r.fid;
    if (r.n == 1) CHECK(r.ok == "no");
    if (r.n == 10) CHECK(r.ok == "yes");
    if (r.n == 12) CHECK(r.ok == "yes");
  }
  CHECK(std::abs(f8 - f12) < 1e-6);
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].tail < rows[i - 1].tail);

  CHECK_THROWS_AS(cmd_sweep_truncation(cfg, {0}, tmp.sub("bad")), ConfigError);
}

TEST_CASE("unwritable output directories raise i/o errors") {
  TempDir tmp;
  write_text_file(tmp.sub("plain_file"), "x");  // mkdir under a file must fail
  ExperimentConfig cfg;
  cfg.n_max = 1;
  cfg.noise = false;
  CHECK_THROWS_AS(cmd_crossing(cfg, tmp.sub("plain_file/nested")), IoError);
}

TEST_CASE("cli maps errors to distinct exit codes") {
  TempDir tmp;

  // i/o: missing config, missing dataset, blocked output directory
  CHECK(run({"magbell", "--config", "/nonexistent/cfg.json", "swap"}) == kExitIo);
  CHECK(run({"magbell", "reconstruct", "/nonexistent/data.txt"}) == kExitIo);
  write_text_file(tmp.sub("plain_file"), "x");
  const std::string blocked = tmp.sub("plain_file/nested");
  CHECK(run({"magbell", "--out", blocked.c_str(), "crossing"}) == kExitIo);

  // config: unknown key in file, bad flag values
  write_text_file(tmp.sub("bad.json"), R"({"unknown_group": {}})");
  CHECK(run({"magbell", "--config", tmp.sub("bad.json").c_str(), "swap"}) == kExitConfig);
  CHECK(run({"magbell", "--shots", "many", "swap"}) == kExitConfig);
  CHECK(run({"magbell", "--noise", "maybe", "swap"}) == kExitConfig);
  CHECK(run({"magbell", "--forward-model", "magic", "swap"}) == kExitConfig);

  // parser-level: no subcommand
  CHECK(run({"magbell"}) != 0);
}

TEST_CASE("cli flags override the config file") {
  TempDir tmp;
  write_text_file(tmp.sub("cfg.json"),
                  R"({"truncation": {"n_max": 2}, "tomography": {"noise": "on"}, "seed": 3})");
  const std::string out = tmp.sub("out");
  CHECK(run({"magbell", "--config", tmp.sub("cfg.json").c_str(), "--noise", "off", "--seed",
             "9", "--out", out.c_str(), "swap"}) == kExitOk);

  const auto j = nlohmann::json::parse(read_text_file(tmp.sub("out/swap_manifest.json")));
  CHECK(j.at("seed") == 9);
  // noiseless curve: first point is exactly on the upper rail
  const auto curve = parse_table(read_text_file(tmp.sub("out/swap_curve.txt")));
  CHECK(curve.front().second == doctest::Approx(1.0).epsilon(1e-12));
}

}  // TEST_SUITE
