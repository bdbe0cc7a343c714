#include "magbell/io.hpp"

#include <json.hpp>

#include <charconv>
#include <ctime>
#include <fstream>
#include <sstream>

namespace magbell {

namespace {

constexpr const char* kDatasetHeader = "# dataset-format v1";
constexpr const char* kStateHeader = "# state-format v1";

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double parse_double(const std::string& tok, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw IoError(std::string("malformed ") + what + ": \"" + tok + "\"");
  return v;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

std::string dataset_to_text(const std::vector<MeasurementRecord>& records) {
  std::string out = kDatasetHeader;
  out += "\n# rotation re_alpha im_alpha tau_ns e_value shots\n";
  for (const auto& r : records) {
    out += to_string(r.setting.rotation);
    out += ' ';
    out += format_double(r.setting.alpha.real());
    out += ' ';
    out += format_double(r.setting.alpha.imag());
    out += ' ';
    out += format_double(r.setting.tau);
    out += ' ';
    out += format_double(r.e_value);
    out += ' ';
    out += r.shots ? std::to_string(*r.shots) : std::string("inf");
    out += '\n';
  }
  return out;
}

std::vector<MeasurementRecord> parse_dataset(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && lines[first].empty()) ++first;
  if (first >= lines.size() || lines[first] != kDatasetHeader)
    throw IoError("dataset: missing or unsupported format header");

  std::vector<MeasurementRecord> records;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string rot, re, im, tau, e, shots;
    if (!(ss >> rot >> re >> im >> tau >> e >> shots))
      throw IoError("dataset: expected 6 fields on line " + std::to_string(li + 1));
    std::string extra;
    if (ss >> extra)
      throw IoError("dataset: trailing fields on line " + std::to_string(li + 1));
    MeasurementRecord rec;
    try {
      rec.setting.rotation = rotation_from_string(rot);
    } catch (const std::invalid_argument& ex) {
      throw IoError(std::string("dataset: ") + ex.what());
    }
    rec.setting.alpha =
        Complex(parse_double(re, "re_alpha"), parse_double(im, "im_alpha"));
    rec.setting.tau = parse_double(tau, "tau_ns");
    rec.e_value = parse_double(e, "e_value");
    if (shots == "inf") {
      rec.shots.reset();
    } else {
      long long n = 0;
      auto [p, ec] = std::from_chars(shots.data(), shots.data() + shots.size(), n);
      if (ec != std::errc() || p != shots.data() + shots.size() || n < 1)
        throw IoError("dataset: malformed shots field \"" + shots + "\"");
      rec.shots = n;
    }
    records.push_back(rec);
  }
  return records;
}

void write_dataset(const std::string& path, const std::vector<MeasurementRecord>& records) {
  write_text_file(path, dataset_to_text(records));
}

std::vector<MeasurementRecord> read_dataset(const std::string& path) {
  return parse_dataset(read_text_file(path));
}

std::string state_to_text(const DensityMatrix& rho) {
  const Mat& m = rho.entries();
  std::string out = kStateHeader;
  out += "\ndim ";
  out += std::to_string(m.rows());
  out += "\nbasis ";
  out += kBasisTag;
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(m(i, j).real());
      out += ' ';
      out += format_double(m(i, j).imag());
    }
    out += '\n';
  }
  return out;
}

DensityMatrix parse_state(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  std::size_t li = 0;
  while (li < lines.size() && lines[li].empty()) ++li;
  if (li >= lines.size() || lines[li] != kStateHeader)
    throw IoError("state: missing or unsupported format header");
  ++li;

  std::istringstream dim_line(li < lines.size() ? lines[li] : "");
  std::string key;
  int dim = 0;
  if (!(dim_line >> key >> dim) || key != "dim" || dim < 2)
    throw IoError("state: expected \"dim N\" line");
  ++li;

  std::istringstream basis_line(li < lines.size() ? lines[li] : "");
  std::string tag;
  if (!(basis_line >> key >> tag) || key != "basis")
    throw IoError("state: expected \"basis TAG\" line");
  if (tag != kBasisTag)
    throw IoError("state: unknown basis convention \"" + tag + "\"");
  ++li;

  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i, ++li) {
    if (li >= lines.size()) throw IoError("state: truncated entry rows");
    std::istringstream row(lines[li]);
    for (int j = 0; j < dim; ++j) {
      std::string re, im;
      if (!(row >> re >> im))
        throw IoError("state: malformed entry row " + std::to_string(i));
      m(i, j) = Complex(parse_double(re, "state entry"), parse_double(im, "state entry"));
    }
  }
  try {
    return DensityMatrix(m);
  } catch (const std::invalid_argument& ex) {
    throw IoError(std::string("state: not a valid density matrix: ") + ex.what());
  }
}

void write_state(const std::string& path, const DensityMatrix& rho) {
  write_text_file(path, state_to_text(rho));
}

DensityMatrix read_state(const std::string& path) {
  return parse_state(read_text_file(path));
}

void write_table(const std::string& path, const std::string& header,
                 const std::vector<std::pair<double, double>>& rows) {
  std::string out = "# " + header + "\n";
  for (const auto& [x, y] : rows) {
    out += format_double(x);
    out += ' ';
    out += format_double(y);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_manifest(const std::string& path, RunManifest manifest) {
  if (manifest.created_utc.empty()) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    manifest.created_utc = buf;
  }
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_hash"] = manifest.config_hash;
  j["seed"] = manifest.seed;
  j["toolkit_version"] = manifest.toolkit_version;
  j["created_utc"] = manifest.created_utc;
  j["outputs"] = manifest.outputs;
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out.good()) throw IoError("write failure: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return buf.str();
}

}  // namespace magbell
