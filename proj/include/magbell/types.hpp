#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace magbell {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Joint basis ordering: |n, q> -> index 2n + q with q in {0:g, 1:+}.
// The magnon index is the major (slowest-varying) one.
inline constexpr const char* kBasisTag = "magnon-major;qubit=g,+";

// Tolerances for state validity checks.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigFloor = -1e-9;

/// Invalid or inconsistent configuration (bad parameter values, grids that
/// cannot identify the state space, unit mistakes).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File-level failures: unreadable, unwritable, or malformed on-disk data.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truncation of the magnon Fock space at |n_max>.
struct FockTruncation {
  int n_max;

  explicit FockTruncation(int n) : n_max(n) {
    if (n < 1) throw std::invalid_argument("FockTruncation: n_max must be >= 1");
  }

  int magnon_dim() const { return n_max + 1; }
  int joint_dim() const { return 2 * (n_max + 1); }

  bool operator==(const FockTruncation& other) const { return n_max == other.n_max; }
};

}  // namespace magbell
