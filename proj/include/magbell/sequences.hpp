#pragma once

#include "magbell/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <optional>
#include <variant>
#include <vector>

namespace magbell {

struct QubitRotation {
  Eigen::Vector3d axis;
  double angle;
};
struct Displacement {
  Complex alpha;
};
struct Swap {
  double tau;
};
struct Idle {
  double tau;
  double detuning;  // rad/ns
};

using PulseOp = std::variant<QubitRotation, Displacement, Swap, Idle>;

struct PulseSequence {
  std::vector<PulseOp> ops;
  bool noise_on = false;
};

/// Autler-Townes dressed drive: the dressed transition used as the qubit sits
/// at omega_ge + rabi/2.
struct ATDrive {
  double omega_ge;  // rad/ns
  double rabi;      // Omega_d, rad/ns

  ATDrive(double wge, double r) : omega_ge(wge), rabi(r) {
    if (r < 0) throw std::invalid_argument("ATDrive: rabi must be >= 0");
  }
};

double at_qubit_frequency(const ATDrive& d);

/// Optional fixed pulse durations; when nonzero and noise is on, a
/// decoherence-only channel of that length follows each instantaneous pulse.
struct PulseTimings {
  double rotation_ns = 0.0;
  double displacement_ns = 0.0;
};

/// Executes pulse-level protocols for one system configuration. Swap segments
/// run at qubit-magnon resonance in the frame rotating at omega_m.
class SequenceEngine {
 public:
  SequenceEngine(SystemParams sys, DecoherenceParams dec, PulseTimings timings = {});

  const SystemParams& system() const { return sys_; }
  const DecoherenceParams& decoherence() const { return dec_; }
  const FockTruncation& truncation() const { return sys_.trunc; }

  /// Conjugation by exp(-i angle (axis . sigma)/2) on the qubit; instantaneous.
  DensityMatrix apply_rotation(const DensityMatrix& rho, const Eigen::Vector3d& axis,
                               double angle, bool noise_on = false) const;

  /// Magnon displacement D_alpha; fails if the coherent tail beyond n_max
  /// exceeds 1e-6.
  DensityMatrix apply_displacement(const DensityMatrix& rho, Complex alpha,
                                   bool noise_on = false) const;

  /// Resonant exchange evolution for duration tau, unitary or Lindblad.
  DensityMatrix apply_swap(const DensityMatrix& rho, double tau, bool noise_on) const;

  /// Evolution at fixed qubit detuning (no exchange), for sensitivity studies.
  DensityMatrix apply_idle(const DensityMatrix& rho, double tau, double detuning,
                           bool noise_on) const;

  DensityMatrix execute(const PulseSequence& seq, const DensityMatrix& rho0) const;

  /// |0,g> -> R_x(pi) -> Swap(pi/(4 g_mq)); the swap duration may be overridden.
  DensityMatrix generate_bell(bool noise_on) const;

  double bell_swap_time() const;
  void set_bell_swap_override(std::optional<double> tau) { bell_swap_override_ = tau; }

  /// (tau, P_+) starting from |0,+>.
  std::vector<std::pair<double, double>> swap_oscillation_curve(
      const std::vector<double>& taus, bool noise_on) const;

  /// (omega_q, eigenvalues of the single-excitation block) over a sweep.
  std::vector<std::pair<double, std::pair<double, double>>> avoided_crossing(
      const std::vector<double>& omega_q_sweep) const;

  /// (tau, qubit purity) with the reduced state rebuilt from the three
  /// rotation readouts I, R_x(pi/2), R_y(pi/2).
  std::vector<std::pair<double, double>> purity_experiment(const std::vector<double>& taus,
                                                           bool noise_on) const;

  /// Qubit purity via direct partial trace (oracle for the readout route).
  double direct_purity(const DensityMatrix& rho) const;

  const Mat& swap_hamiltonian() const { return h_swap_; }
  Mat swap_unitary(double tau) const;
  const Superoperator& swap_liouvillian() const;

 private:
  DensityMatrix conjugate(const DensityMatrix& rho, const Mat& u) const;
  DensityMatrix pulse_decay(const DensityMatrix& rho, double duration) const;

  SystemParams sys_;
  DecoherenceParams dec_;
  PulseTimings timings_;
  std::optional<double> bell_swap_override_;

  Mat h_swap_;
  Eigen::SelfAdjointEigenSolver<Mat> h_swap_eig_;
  mutable std::optional<Superoperator> l_swap_;
  mutable std::optional<Superoperator> l_decay_only_;
};

/// Uniform grid helper (count points from lo to hi inclusive).
std::vector<double> linspace(double lo, double hi, int count);

/// exp(-i angle (axis . sigma)/2) as a 2x2 matrix; axis must be unit length.
Mat qubit_rotation_unitary(const Eigen::Vector3d& axis, double angle);

}  // namespace magbell
