#pragma once

#include "magbell/dynamics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace magbell {

enum class RotationLabel { I, Rx_half, Ry_half };

std::string to_string(RotationLabel r);
RotationLabel rotation_from_string(const std::string& s);

/// One composite-observable setting: qubit rotation, magnon displacement,
/// swap duration.
struct TomographySetting {
  RotationLabel rotation;
  Complex alpha;
  double tau;
};

/// The full measurement grid; flat index order is rotation-major, then alpha
/// (imaginary part ascending, real part ascending within a row), then tau.
struct SettingGrid {
  std::vector<RotationLabel> rotations;
  std::vector<Complex> alphas;
  std::vector<double> taus;

  /// 3 rotations x 8x8 alphas (Re/Im from -0.875 to 0.875, step 0.25) x
  /// 61 swap times (0 to 180 ns).
  static SettingGrid standard();

  static SettingGrid custom(int alpha_points_per_axis, double alpha_min, double alpha_step,
                            double tau_min, double tau_max, int tau_count);

  int size() const {
    return static_cast<int>(rotations.size() * alphas.size() * taus.size());
  }
  int flat_index(int r, int a, int t) const {
    return (r * static_cast<int>(alphas.size()) + a) * static_cast<int>(taus.size()) + t;
  }
  TomographySetting setting(int flat) const;
};

struct MeasurementRecord {
  TomographySetting setting;
  double e_value = 0.0;
  std::optional<long long> shots;  // nullopt = exact expectation

  bool exact() const { return !shots.has_value(); }
};

enum class NoiseModel { ideal, lindblad };

/// Readout assignment errors: probability of reading |+> given |g>, and of
/// reading |g> given |+>.
struct ReadoutError {
  double eps_ground = 0.0;
  double eps_excited = 0.0;

  double apply(double p) const { return (1.0 - eps_excited) * p + eps_ground * (1.0 - p); }
  bool any() const { return eps_ground != 0.0 || eps_excited != 0.0; }
};

/// Precomputed per-setting measurement model. The effect operator of setting
/// (R, alpha, tau) is R^t D^t X_tau D R with X_tau the excited-state projector
/// pulled back through the swap segment (unitary or Lindblad channel).
class ForwardModel {
 public:
  /// keep_propagators stores the 61 full swap superoperators, required by the
  /// forward expectation path under the lindblad model.
  ForwardModel(const SystemParams& sys, const DecoherenceParams& dec, SettingGrid grid,
               NoiseModel model, bool keep_propagators = false);

  const SettingGrid& grid() const { return grid_; }
  NoiseModel noise_model() const { return model_; }
  const FockTruncation& truncation() const { return trunc_; }
  int dim() const { return trunc_.joint_dim(); }
  int n_settings() const { return grid_.size(); }

  /// Effect operator M_s (Hermitian, 0 <= M_s <= I).
  Mat effect(int flat_index) const;
  Mat effect(const TomographySetting& s) const;

  /// Expectations Tr[Pi_+ Phi_tau(D R rho R^t D^t)] for every grid setting,
  /// evaluated by forward state propagation.
  Eigen::VectorXd exact_expectations(const DensityMatrix& rho) const;

 private:
  int rotation_index(RotationLabel r) const;
  int alpha_index(Complex a) const;
  int tau_index(double t) const;

  SettingGrid grid_;
  NoiseModel model_;
  FockTruncation trunc_;
  Mat projector_plus_;              // joint-space |+><+| projector
  std::vector<Mat> rotations_;      // joint-space rotation unitaries
  std::vector<Mat> displacements_;  // joint-space displacement unitaries
  std::vector<Mat> effect_kernels_; // X_tau per tau
  std::vector<Mat> swap_unitaries_;     // ideal model
  std::vector<Mat> swap_propagators_;   // lindblad model, if kept
};

/// Binomial sampling around exact expectations with per-setting derived RNG
/// streams; shots = nullopt returns the exact values.
std::vector<MeasurementRecord> sample_records(const SettingGrid& grid,
                                              const Eigen::VectorXd& exact,
                                              std::optional<long long> shots,
                                              std::uint64_t seed,
                                              const ReadoutError& readout = {});

std::vector<MeasurementRecord> simulate_dataset(const DensityMatrix& rho,
                                                const ForwardModel& model,
                                                std::optional<long long> shots,
                                                std::uint64_t seed,
                                                const ReadoutError& readout = {});

// ---------------------------------------------------------------------------
// State metrics
// ---------------------------------------------------------------------------

/// sqrt(<psi|rho|psi>).
double fidelity(const DensityMatrix& rho, const PureState& target);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

}  // namespace magbell
