#pragma once

#include "magbell/operators.hpp"

namespace magbell {

/// Angular frequencies in rad/ns, times in ns, rates in 1/ns throughout.
struct SystemParams {
  double omega_q;  // qubit transition frequency (rad/ns)
  double omega_m;  // magnon frequency (rad/ns)
  double g_mq;     // exchange coupling strength (rad/ns)
  FockTruncation trunc;

  SystemParams(double wq, double wm, double g, FockTruncation t)
      : omega_q(wq), omega_m(wm), g_mq(g), trunc(t) {
    if (g_mq <= 0.0) throw std::invalid_argument("SystemParams: g_mq must be > 0");
    if (omega_m <= 0.0) throw std::invalid_argument("SystemParams: omega_m must be > 0");
  }

  double detuning() const { return omega_q - omega_m; }
};

struct DecoherenceParams {
  double gamma1_q = 0.0;     // qubit relaxation rate (1/ns)
  double gamma_phi_q = 0.0;  // qubit pure-dephasing rate (1/ns)
  double kappa_m = 0.0;      // magnon decay rate (1/ns)
  double n_thermal = 0.0;    // mean thermal magnon occupancy

  void validate() const {
    if (gamma1_q < 0 || gamma_phi_q < 0 || kappa_m < 0 || n_thermal < 0)
      throw std::invalid_argument("DecoherenceParams: rates must be >= 0");
  }
  bool any_noise() const {
    return gamma1_q > 0 || gamma_phi_q > 0 || kappa_m > 0;
  }
};

enum class Frame { lab, rotating_at_omega_m };

/// d^2 x d^2 matrix acting on column-vectorized operators.
struct Superoperator {
  Mat m;
  int dim;  // underlying Hilbert-space dimension d

  Superoperator(Mat mat, int d) : m(std::move(mat)), dim(d) {
    if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(d) * d)
      throw std::invalid_argument("Superoperator: matrix must be d^2 x d^2");
  }

  /// Apply to an operator via vectorization.
  Mat apply(const Mat& op) const { return unvectorize(m * vectorize(op), dim); }
};

/// Eq.-of-motion Hamiltonian H/hbar = (1/2) w_q sz + w_m a^t a + g (s+ a + s- a^t)
/// on the joint space; in the rotating frame the diagonal part reduces to
/// (1/2)(w_q - w_m) sz.
Mat jc_hamiltonian(const SystemParams& p, Frame frame);

/// U = exp(-i H t) via Hermitian eigendecomposition.
Mat unitary_propagator(const Mat& h, double t);

/// Magnon displacement exp(alpha a^t - conj(alpha) a) on the truncated space,
/// embedded in the joint space.
Mat displacement_operator(Complex alpha, const FockTruncation& trunc);

/// Lindblad generator L with d vec(rho)/dt = L vec(rho). Collapse operators:
/// sqrt(gamma1) sigma_-, sqrt(gamma_phi/2) sigma_z, sqrt(kappa_m) a, and
/// sqrt(kappa_m n_thermal) a^t when n_thermal > 0.
Superoperator liouvillian(const Mat& h, const DecoherenceParams& dec,
                          const FockTruncation& trunc);

/// exp(L t) by scaling-and-squaring.
Superoperator channel_propagator(const Superoperator& l, double t);

/// Classic fixed-step RK4 integration of d vec(rho)/dt = L vec(rho);
/// independent cross-check for channel_propagator.
DensityMatrix evolve_rk4(const Superoperator& l, const DensityMatrix& rho0, double t,
                         double dt);

/// Adjoint map with Tr[A Phi(rho)] = Tr[Phi^t(A) rho] for all A, rho.
Superoperator channel_adjoint(const Superoperator& phi);

/// Superoperator of rho -> U rho U^t.
Superoperator conjugation_superoperator(const Mat& u);

Superoperator identity_superoperator(int dim);

/// Choi matrix of the map (block (i,j) holds Phi(|i><j|)); PSD iff the map is
/// completely positive.
Mat choi_matrix(const Superoperator& phi);

/// Evolve a state through a channel, with Hermitization of the result before
/// validation.
DensityMatrix apply_channel(const Superoperator& phi, const DensityMatrix& rho);

}  // namespace magbell
