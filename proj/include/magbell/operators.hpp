#pragma once

#include "magbell/types.hpp"

namespace magbell {

// ---------------------------------------------------------------------------
// Elementary operators
// ---------------------------------------------------------------------------

/// Magnon lowering operator on the truncated Fock space, <n-1|a|n> = sqrt(n).
Mat annihilation(const FockTruncation& trunc);

/// a^dagger on the truncated Fock space.
Mat creation(const FockTruncation& trunc);

/// Number operator a^dagger a, diagonal (0, 1, ..., n_max).
Mat number_operator(const FockTruncation& trunc);

enum class QubitOp {
  sigma_z,
  sigma_plus,
  sigma_minus,
  sigma_x,
  sigma_y,
  projector_g,
  projector_plus,
};

/// 2x2 qubit operator in basis order (|g>, |+>), with |+> the excited state,
/// sigma_z = |+><+| - |g><g|, sigma_+ = |+><g|.
Mat qubit_op(QubitOp kind);

/// Kronecker product in the global magnon-major convention: tensor(A_magnon,
/// B_qubit) acts on joint index 2n + q.
Mat tensor(const Mat& a, const Mat& b);

/// Embed a magnon-space operator into the joint space (op (x) I_2).
Mat lift_magnon(const Mat& op);

/// Embed a qubit-space operator into the joint space (I_magnon (x) op).
Mat lift_qubit(const Mat& op, const FockTruncation& trunc);

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

bool is_hermitian(const Mat& m, double tol = kHermTol);
bool is_unitary(const Mat& m, double tol = 1e-12);

/// Largest absolute elementwise deviation from Hermiticity.
double hermiticity_deviation(const Mat& m);

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

class PureState {
 public:
  explicit PureState(Vec amplitudes);

  const Vec& amplitudes() const { return amps_; }
  int dim() const { return static_cast<int>(amps_.size()); }

 private:
  Vec amps_;
};

/// Hermitian, unit-trace, PSD matrix; the invariants are enforced at
/// construction (tolerances kHermTol / kTraceTol / kEigFloor).
class DensityMatrix {
 public:
  explicit DensityMatrix(Mat entries);

  static DensityMatrix from_pure(const PureState& psi);

  const Mat& entries() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  /// Re-run the construction-time validity checks.
  bool is_valid(double herm_tol = kHermTol, double trace_tol = kTraceTol,
                double eig_floor = kEigFloor) const;

 private:
  Mat m_;
};

enum class QubitLevel { g = 0, plus = 1 };

/// Joint basis vector |n, q> at index 2n + q.
PureState basis_state(int n, QubitLevel q, const FockTruncation& trunc);

/// The target Bell state (|0,+> - i|1,g>)/sqrt(2) on the joint space.
PureState bell_state(const FockTruncation& trunc);

/// Reduced 2x2 qubit state, summing over the magnon index.
DensityMatrix partial_trace_magnon(const DensityMatrix& rho, const FockTruncation& trunc);

/// Partial trace as a raw matrix operation (no state validation); used for
/// linearity checks on non-state inputs.
Mat partial_trace_magnon_raw(const Mat& joint, const FockTruncation& trunc);

// ---------------------------------------------------------------------------
// Vectorization (column stacking) and misc
// ---------------------------------------------------------------------------

Vec vectorize(const Mat& m);
Mat unvectorize(const Vec& v, int dim);

/// Probability weight of a coherent state |alpha> beyond Fock level n_max
/// (Poisson tail with mean |alpha|^2).
double coherent_tail_weight(Complex alpha, int n_max);

}  // namespace magbell
