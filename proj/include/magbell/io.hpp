#pragma once

#include "magbell/tomography.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace magbell {

inline constexpr const char* kToolkitVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Dataset files: one record per line (rotation, Re alpha, Im alpha, tau_ns,
// e_value, shots), shots written as "inf" for exact-mode records. All doubles
// use shortest-exact decimal form, so parse(emit(x)) == x bit for bit.
// ---------------------------------------------------------------------------

std::string dataset_to_text(const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> parse_dataset(const std::string& text);

void write_dataset(const std::string& path, const std::vector<MeasurementRecord>& records);
std::vector<MeasurementRecord> read_dataset(const std::string& path);

// ---------------------------------------------------------------------------
// State files: dimension, basis tag, then row-major (Re, Im) pairs.
// ---------------------------------------------------------------------------

std::string state_to_text(const DensityMatrix& rho);
DensityMatrix parse_state(const std::string& text);

void write_state(const std::string& path, const DensityMatrix& rho);
DensityMatrix read_state(const std::string& path);

// ---------------------------------------------------------------------------
// Two-column numeric tables (curves) with a comment header.
// ---------------------------------------------------------------------------

void write_table(const std::string& path, const std::string& header,
                 const std::vector<std::pair<double, double>>& rows);

// ---------------------------------------------------------------------------
// Run manifests: provenance for every command invocation.
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string toolkit_version = kToolkitVersion;
  std::string created_utc;  // filled by write_manifest when empty
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, RunManifest manifest);

/// Helper shared by writers; throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace magbell
