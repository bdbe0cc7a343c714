#include "magbell/sequences.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace magbell {

double at_qubit_frequency(const ATDrive& d) { return d.omega_ge + 0.5 * d.rabi; }

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) return {lo};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return out;
}

Mat qubit_rotation_unitary(const Eigen::Vector3d& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("qubit rotation: axis must have unit norm");
  Mat n_dot_sigma = axis.x() * qubit_op(QubitOp::sigma_x) +
                    axis.y() * qubit_op(QubitOp::sigma_y) +
                    axis.z() * qubit_op(QubitOp::sigma_z);
  return std::cos(0.5 * angle) * Mat::Identity(2, 2) -
         kI * std::sin(0.5 * angle) * n_dot_sigma;
}

SequenceEngine::SequenceEngine(SystemParams sys, DecoherenceParams dec, PulseTimings timings)
    : sys_(std::move(sys)), dec_(dec), timings_(timings) {
  dec_.validate();
  SystemParams resonant = sys_;
  resonant.omega_q = resonant.omega_m;
  h_swap_ = jc_hamiltonian(resonant, Frame::rotating_at_omega_m);
  h_swap_eig_.compute(h_swap_);
}

Mat SequenceEngine::swap_unitary(double tau) const {
  const Eigen::VectorXd& w = h_swap_eig_.eigenvalues();
  Vec phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (w(k) * tau));
  return h_swap_eig_.eigenvectors() * phases.asDiagonal() *
         h_swap_eig_.eigenvectors().adjoint();
}

const Superoperator& SequenceEngine::swap_liouvillian() const {
  if (!l_swap_) l_swap_ = liouvillian(h_swap_, dec_, sys_.trunc);
  return *l_swap_;
}

DensityMatrix SequenceEngine::conjugate(const DensityMatrix& rho, const Mat& u) const {
  Mat out = u * rho.entries() * u.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix SequenceEngine::pulse_decay(const DensityMatrix& rho, double duration) const {
  if (duration <= 0 || !dec_.any_noise()) return rho;
  if (!l_decay_only_) {
    Mat h0 = Mat::Zero(sys_.trunc.joint_dim(), sys_.trunc.joint_dim());
    l_decay_only_ = liouvillian(h0, dec_, sys_.trunc);
  }
  return apply_channel(channel_propagator(*l_decay_only_, duration), rho);
}

DensityMatrix SequenceEngine::apply_rotation(const DensityMatrix& rho,
                                             const Eigen::Vector3d& axis, double angle,
                                             bool noise_on) const {
  Mat u = lift_qubit(qubit_rotation_unitary(axis, angle), sys_.trunc);
  DensityMatrix out = conjugate(rho, u);
  return noise_on ? pulse_decay(out, timings_.rotation_ns) : out;
}

DensityMatrix SequenceEngine::apply_displacement(const DensityMatrix& rho, Complex alpha,
                                                 bool noise_on) const {
  if (coherent_tail_weight(alpha, sys_.trunc.n_max) >= 1e-6)
    throw std::invalid_argument(
        "apply_displacement: truncated coherent tail exceeds 1e-6 at configured n_max");
  DensityMatrix out = conjugate(rho, displacement_operator(alpha, sys_.trunc));
  return noise_on ? pulse_decay(out, timings_.displacement_ns) : out;
}

DensityMatrix SequenceEngine::apply_swap(const DensityMatrix& rho, double tau,
                                         bool noise_on) const {
  if (tau < 0) throw std::invalid_argument("apply_swap: tau must be >= 0");
  if (!noise_on || !dec_.any_noise()) return conjugate(rho, swap_unitary(tau));
  return apply_channel(channel_propagator(swap_liouvillian(), tau), rho);
}

DensityMatrix SequenceEngine::apply_idle(const DensityMatrix& rho, double tau,
                                         double detuning, bool noise_on) const {
  if (tau < 0) throw std::invalid_argument("apply_idle: tau must be >= 0");
  Mat h = 0.5 * detuning * lift_qubit(qubit_op(QubitOp::sigma_z), sys_.trunc);
  if (!noise_on || !dec_.any_noise()) return conjugate(rho, unitary_propagator(h, tau));
  return apply_channel(channel_propagator(liouvillian(h, dec_, sys_.trunc), tau), rho);
}

DensityMatrix SequenceEngine::execute(const PulseSequence& seq,
                                      const DensityMatrix& rho0) const {
  DensityMatrix rho = rho0;
  for (const PulseOp& op : seq.ops) {
    rho = std::visit(
        [&](const auto& p) -> DensityMatrix {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, QubitRotation>)
            return apply_rotation(rho, p.axis, p.angle, seq.noise_on);
          else if constexpr (std::is_same_v<T, Displacement>)
            return apply_displacement(rho, p.alpha, seq.noise_on);
          else if constexpr (std::is_same_v<T, Swap>)
            return apply_swap(rho, p.tau, seq.noise_on);
          else
            return apply_idle(rho, p.tau, p.detuning, seq.noise_on);
        },
        op);
  }
  return rho;
}

double SequenceEngine::bell_swap_time() const {
  if (bell_swap_override_) return *bell_swap_override_;
  return std::numbers::pi / (4.0 * sys_.g_mq);
}

DensityMatrix SequenceEngine::generate_bell(bool noise_on) const {
  DensityMatrix rho = DensityMatrix::from_pure(basis_state(0, QubitLevel::g, sys_.trunc));
  PulseSequence seq;
  seq.noise_on = noise_on;
  seq.ops = {QubitRotation{{1.0, 0.0, 0.0}, std::numbers::pi}, Swap{bell_swap_time()}};
  return execute(seq, rho);
}

std::vector<std::pair<double, double>> SequenceEngine::swap_oscillation_curve(
    const std::vector<double>& taus, bool noise_on) const {
  const Mat proj = lift_qubit(qubit_op(QubitOp::projector_plus), sys_.trunc);
  DensityMatrix rho0 = DensityMatrix::from_pure(basis_state(0, QubitLevel::plus, sys_.trunc));
  std::vector<std::pair<double, double>> curve;
  curve.reserve(taus.size());
  for (double tau : taus) {
    DensityMatrix rho = apply_swap(rho0, tau, noise_on);
    curve.emplace_back(tau, (proj * rho.entries()).trace().real());
  }
  return curve;
}

std::vector<std::pair<double, std::pair<double, double>>> SequenceEngine::avoided_crossing(
    const std::vector<double>& omega_q_sweep) const {
  std::vector<std::pair<double, std::pair<double, double>>> out;
  out.reserve(omega_q_sweep.size());
  for (double wq : omega_q_sweep) {
    SystemParams p = sys_;
    p.omega_q = wq;
    Mat h = jc_hamiltonian(p, Frame::rotating_at_omega_m);
    // Single-excitation block spans |0,+> (index 1) and |1,g> (index 2).
    Mat block(2, 2);
    block << h(1, 1), h(1, 2), h(2, 1), h(2, 2);
    Eigen::SelfAdjointEigenSolver<Mat> es(block, Eigen::EigenvaluesOnly);
    out.emplace_back(wq, std::make_pair(es.eigenvalues()(0), es.eigenvalues()(1)));
  }
  return out;
}

double SequenceEngine::direct_purity(const DensityMatrix& rho) const {
  Mat reduced = partial_trace_magnon_raw(rho.entries(), sys_.trunc);
  return (reduced * reduced).trace().real();
}

std::vector<std::pair<double, double>> SequenceEngine::purity_experiment(
    const std::vector<double>& taus, bool noise_on) const {
  // Three readout settings and their 2x2 effects R^t |+><+| R.
  const Mat proj = qubit_op(QubitOp::projector_plus);
  const std::array<Mat, 3> rotations = {
      Mat(Mat::Identity(2, 2)),
      qubit_rotation_unitary({1.0, 0.0, 0.0}, 0.5 * std::numbers::pi),
      qubit_rotation_unitary({0.0, 1.0, 0.0}, 0.5 * std::numbers::pi)};
  const std::array<Mat, 3> paulis = {qubit_op(QubitOp::sigma_x), qubit_op(QubitOp::sigma_y),
                                     qubit_op(QubitOp::sigma_z)};

  Eigen::Matrix3d coeff;
  Eigen::Vector3d offset;
  for (int r = 0; r < 3; ++r) {
    Mat effect = rotations[r].adjoint() * proj * rotations[r];
    offset(r) = 0.5 * effect.trace().real();
    for (int i = 0; i < 3; ++i) coeff(r, i) = 0.5 * (effect * paulis[i]).trace().real();
  }
  Eigen::FullPivLU<Eigen::Matrix3d> solver(coeff);

  DensityMatrix rho0 = DensityMatrix::from_pure(basis_state(0, QubitLevel::g, sys_.trunc));
  const Mat joint_proj = lift_qubit(proj, sys_.trunc);
  std::vector<std::pair<double, double>> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    DensityMatrix rho = apply_rotation(rho0, {1.0, 0.0, 0.0}, std::numbers::pi, noise_on);
    rho = apply_swap(rho, tau, noise_on);
    Eigen::Vector3d p_plus;
    for (int r = 0; r < 3; ++r) {
      DensityMatrix rotated = conjugate(rho, lift_qubit(rotations[r], sys_.trunc));
      p_plus(r) = (joint_proj * rotated.entries()).trace().real();
    }
    Eigen::Vector3d bloch = solver.solve(p_plus - offset);
    out.emplace_back(tau, 0.5 * (1.0 + bloch.squaredNorm()));
  }
  return out;
}

}  // namespace magbell
