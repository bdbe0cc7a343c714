#pragma once

#include "magbell/tomography.hpp"

#include <cstdint>
#include <vector>

namespace magbell {

/// Linear map from vectorized states to expectation values: row s is
/// vec(M_s)^t. Rows are computed independently; the Gram matrix and its
/// eigendecomposition are cached for the solver.
class DesignMatrix {
 public:
  explicit DesignMatrix(const ForwardModel& model);

  const Mat& rows() const { return a_; }
  const SettingGrid& grid() const { return grid_; }
  const FockTruncation& truncation() const { return trunc_; }
  int dim() const { return trunc_.joint_dim(); }

  /// Predicted expectations A vec(rho) (imaginary parts discarded; they
  /// vanish for Hermitian input).
  Eigen::VectorXd predict(const Mat& rho) const;

  const Mat& gram() const { return gram_; }             // A^t A, Hermitian PSD
  Vec rhs(const Eigen::VectorXd& e) const;              // A^t e

  Mat weighted_gram(const Eigen::VectorXd& w) const;    // A^t W A
  Vec weighted_rhs(const Eigen::VectorXd& w, const Eigen::VectorXd& e) const;

  double lambda_max() const { return eig_.eigenvalues().maxCoeff(); }
  const Eigen::SelfAdjointEigenSolver<Mat>& gram_eig() const { return eig_; }

  /// Numerical rank of A from the Gram spectrum, singular-value tolerance
  /// sigma_max * max(rows, cols) * machine-epsilon.
  int rank() const;
  int unidentifiable_directions() const { return dim() * dim() - rank(); }

 private:
  SettingGrid grid_;
  FockTruncation trunc_;
  Mat a_;
  Mat gram_;
  Eigen::SelfAdjointEigenSolver<Mat> eig_;
};

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1},
/// deterministic water-filling with a stable descending sort.
Eigen::VectorXd simplex_project(const Eigen::VectorXd& v);

/// Frobenius-nearest positive semidefinite unit-trace matrix: Hermitize,
/// eigendecompose, project the spectrum onto the simplex.
Mat psd_trace_one_project(const Mat& x);

struct SolverOptions {
  int max_iterations = 20000;
  double tolerance = 1e-9;  // on the gradient-map Frobenius norm
  bool weighted = false;    // binomial-variance weights (requires finite shots)
};

struct ReconstructionResult {
  DensityMatrix rho_hat;
  double fidelity = 0.0;      // against the Bell target at the working truncation
  double purity_qubit = 0.0;  // Tr(rho_q^2) of the qubit marginal
  double residual = 0.0;      // RMS of e - Tr[M_s rho_hat]
  int iterations = 0;
  bool converged = false;
  double grad_map_norm = 0.0;
  std::vector<double> objective;  // accepted-iterate objective values
};

/// Least-squares state estimate by monotone accelerated projected gradient
/// (gradient step on the quadratic objective, PSD trace-one projection).
/// Records must follow the design grid's flat order.
ReconstructionResult reconstruct(const std::vector<MeasurementRecord>& records,
                                 const DesignMatrix& design,
                                 const SolverOptions& opts = {});

struct BootstrapResult {
  double sigma = 0.0;  // standard deviation of resampled fidelities
  bool valid = false;  // false when resamples < 2
  std::vector<double> fidelities;
};

/// Parametric bootstrap: redraw each record binomially around its e_value,
/// re-run the reconstruction, report the fidelity spread. Requires
/// finite-shot records.
BootstrapResult bootstrap_error(const std::vector<MeasurementRecord>& records,
                                const DesignMatrix& design, const SolverOptions& opts,
                                int resamples, std::uint64_t seed);

}  // namespace magbell
