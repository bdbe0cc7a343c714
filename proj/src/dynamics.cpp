#include "magbell/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace magbell {

Mat jc_hamiltonian(const SystemParams& p, Frame frame) {
  const Mat a = annihilation(p.trunc);
  const Mat sz = lift_qubit(qubit_op(QubitOp::sigma_z), p.trunc);
  const Mat sp_a = tensor(a, qubit_op(QubitOp::sigma_plus));  // sigma_+ a
  Mat h = p.g_mq * (sp_a + Mat(sp_a.adjoint()));
  if (frame == Frame::lab) {
    h += 0.5 * p.omega_q * sz + p.omega_m * lift_magnon(number_operator(p.trunc));
  } else {
    h += 0.5 * p.detuning() * sz;
  }
  return h;
}

Mat unitary_propagator(const Mat& h, double t) {
  if (!is_hermitian(h, 1e-10))
    throw std::invalid_argument("unitary_propagator: Hamiltonian must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  Vec phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k)
    phases(k) = std::exp(-kI * (w(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat displacement_operator(Complex alpha, const FockTruncation& trunc) {
  const Mat a = annihilation(trunc);
  // Generator alpha a^t - conj(alpha) a is anti-Hermitian; exponentiate as
  // exp(-i H) with the Hermitian H = i (alpha a^t - conj(alpha) a).
  Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
  Mat d = unitary_propagator(kI * gen, 1.0);
  return lift_magnon(d);
}

namespace {

// Superoperators of left/right multiplication under column stacking:
// vec(A X) = (I (x) A) vec(X), vec(X B) = (B^T (x) I) vec(X).
Mat left_mult(const Mat& a) { return tensor(Mat::Identity(a.rows(), a.cols()), a); }
Mat right_mult(const Mat& b) { return tensor(b.transpose(), Mat::Identity(b.rows(), b.cols())); }

// Dissipator D[c] rho = c rho c^t - (1/2){c^t c, rho} in vectorized form.
Mat dissipator(const Mat& c) {
  const Mat cdc = c.adjoint() * c;
  return tensor(c.conjugate(), c) - 0.5 * left_mult(cdc) - 0.5 * right_mult(cdc);
}

}  // namespace

Superoperator liouvillian(const Mat& h, const DecoherenceParams& dec,
                          const FockTruncation& trunc) {
  dec.validate();
  if (!is_hermitian(h, 1e-10))
    throw std::invalid_argument("liouvillian: Hamiltonian must be Hermitian");
  const int d = trunc.joint_dim();
  if (h.rows() != d) throw std::invalid_argument("liouvillian: dimension mismatch");

  Mat l = -kI * (left_mult(h) - right_mult(h));
  if (dec.gamma1_q > 0)
    l += dec.gamma1_q * dissipator(lift_qubit(qubit_op(QubitOp::sigma_minus), trunc));
  if (dec.gamma_phi_q > 0)
    l += 0.5 * dec.gamma_phi_q * dissipator(lift_qubit(qubit_op(QubitOp::sigma_z), trunc));
  if (dec.kappa_m > 0) {
    l += dec.kappa_m * dissipator(lift_magnon(annihilation(trunc)));
    if (dec.n_thermal > 0)
      l += dec.kappa_m * dec.n_thermal * dissipator(lift_magnon(creation(trunc)));
  }
  return Superoperator(std::move(l), d);
}

Superoperator channel_propagator(const Superoperator& l, double t) {
  if (t < 0) throw std::invalid_argument("channel_propagator: t must be >= 0");
  if (t == 0) return identity_superoperator(l.dim);
  Mat e = (l.m * t).exp();
  return Superoperator(std::move(e), l.dim);
}

DensityMatrix evolve_rk4(const Superoperator& l, const DensityMatrix& rho0, double t,
                         double dt) {
  if (dt <= 0 || dt > t) throw std::invalid_argument("evolve_rk4: require 0 < dt <= t");
  Vec x = vectorize(rho0.entries());
  const long long n_steps = static_cast<long long>(std::ceil(t / dt - 1e-12));
  const double h = t / static_cast<double>(n_steps);
  for (long long s = 0; s < n_steps; ++s) {
    Vec k1 = l.m * x;
    Vec k2 = l.m * (x + 0.5 * h * k1);
    Vec k3 = l.m * (x + 0.5 * h * k2);
    Vec k4 = l.m * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  Mat rho = unvectorize(x, rho0.dim());
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

Superoperator channel_adjoint(const Superoperator& phi) {
  return Superoperator(phi.m.adjoint(), phi.dim);
}

Superoperator conjugation_superoperator(const Mat& u) {
  return Superoperator(tensor(u.conjugate(), u), static_cast<int>(u.rows()));
}

Superoperator identity_superoperator(int dim) {
  return Superoperator(Mat::Identity(static_cast<Eigen::Index>(dim) * dim,
                                     static_cast<Eigen::Index>(dim) * dim),
                       dim);
}

Mat choi_matrix(const Superoperator& phi) {
  const int d = phi.dim;
  Mat choi(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  // Block (i,j) of the Choi matrix is Phi(|i><j|); entry <m|Phi(|i><j|)|n>
  // sits at superoperator entry (m + n d, i + j d).
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
          choi(static_cast<Eigen::Index>(i) * d + m, static_cast<Eigen::Index>(j) * d + n) =
              phi.m(m + static_cast<Eigen::Index>(n) * d, i + static_cast<Eigen::Index>(j) * d);
  return choi;
}

DensityMatrix apply_channel(const Superoperator& phi, const DensityMatrix& rho) {
  Mat out = phi.apply(rho.entries());
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

}  // namespace magbell
