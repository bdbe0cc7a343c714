#include "magbell/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace magbell {

Mat annihilation(const FockTruncation& trunc) {
  const int d = trunc.magnon_dim();
  Mat a = Mat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Mat creation(const FockTruncation& trunc) { return annihilation(trunc).adjoint(); }

Mat number_operator(const FockTruncation& trunc) {
  const int d = trunc.magnon_dim();
  Mat n = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Mat qubit_op(QubitOp kind) {
  Mat m = Mat::Zero(2, 2);
  switch (kind) {
    case QubitOp::sigma_z:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    case QubitOp::sigma_plus:
      m(1, 0) = 1.0;  // |+><g|
      break;
    case QubitOp::sigma_minus:
      m(0, 1) = 1.0;  // |g><+|
      break;
    case QubitOp::sigma_x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case QubitOp::sigma_y:
      m(0, 1) = kI;
      m(1, 0) = -kI;
      break;
    case QubitOp::projector_g:
      m(0, 0) = 1.0;
      break;
    case QubitOp::projector_plus:
      m(1, 1) = 1.0;
      break;
  }
  return m;
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat lift_magnon(const Mat& op) { return tensor(op, Mat::Identity(2, 2)); }

Mat lift_qubit(const Mat& op, const FockTruncation& trunc) {
  return tensor(Mat::Identity(trunc.magnon_dim(), trunc.magnon_dim()), op);
}

double hermiticity_deviation(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && hermiticity_deviation(m) <= tol;
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  Mat delta = m * m.adjoint() - Mat::Identity(m.rows(), m.cols());
  return delta.cwiseAbs().maxCoeff() <= tol;
}

PureState::PureState(Vec amplitudes) : amps_(std::move(amplitudes)) {
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: amplitudes must have unit norm");
}

DensityMatrix::DensityMatrix(Mat entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  if (!is_valid())
    throw std::invalid_argument("DensityMatrix: invariants violated (Hermiticity/trace/PSD)");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const Vec& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

bool DensityMatrix::is_valid(double herm_tol, double trace_tol, double eig_floor) const {
  if (hermiticity_deviation(m_) > herm_tol) return false;
  if (std::abs(m_.trace().real() - 1.0) > trace_tol || std::abs(m_.trace().imag()) > trace_tol)
    return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= eig_floor;
}

PureState basis_state(int n, QubitLevel q, const FockTruncation& trunc) {
  if (n < 0 || n > trunc.n_max)
    throw std::invalid_argument("basis_state: Fock index out of range");
  Vec v = Vec::Zero(trunc.joint_dim());
  v(2 * n + static_cast<int>(q)) = 1.0;
  return PureState(std::move(v));
}

PureState bell_state(const FockTruncation& trunc) {
  Vec v = Vec::Zero(trunc.joint_dim());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  v(2 * 0 + 1) = inv_sqrt2;        // |0,+>
  v(2 * 1 + 0) = -kI * inv_sqrt2;  // -i |1,g>
  return PureState(std::move(v));
}

Mat partial_trace_magnon_raw(const Mat& joint, const FockTruncation& trunc) {
  if (joint.rows() != trunc.joint_dim() || joint.cols() != trunc.joint_dim())
    throw std::invalid_argument("partial_trace_magnon: dimension mismatch with truncation");
  Mat reduced = Mat::Zero(2, 2);
  for (int q = 0; q < 2; ++q)
    for (int p = 0; p < 2; ++p)
      for (int n = 0; n < trunc.magnon_dim(); ++n)
        reduced(q, p) += joint(2 * n + q, 2 * n + p);
  return reduced;
}

DensityMatrix partial_trace_magnon(const DensityMatrix& rho, const FockTruncation& trunc) {
  return DensityMatrix(partial_trace_magnon_raw(rho.entries(), trunc));
}

Vec vectorize(const Mat& m) {
  Vec v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) v(k++) = m(r, c);
  return v;
}

Mat unvectorize(const Vec& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw std::invalid_argument("unvectorize: size mismatch");
  Mat m(dim, dim);
  Eigen::Index k = 0;
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) m(r, c) = v(k++);
  return m;
}

double coherent_tail_weight(Complex alpha, int n_max) {
  const double lambda = std::norm(alpha);
  double term = std::exp(-lambda);
  double cdf = term;
  for (int k = 1; k <= n_max; ++k) {
    term *= lambda / k;
    cdf += term;
  }
  return std::max(0.0, 1.0 - cdf);
}

}  // namespace magbell
