#include "magbell/tomography.hpp"

#include "magbell/parallel.hpp"
#include "magbell/rng.hpp"
#include "magbell/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magbell {

std::string to_string(RotationLabel r) {
  switch (r) {
    case RotationLabel::I: return "I";
    case RotationLabel::Rx_half: return "Rx90";
    case RotationLabel::Ry_half: return "Ry90";
  }
  throw std::logic_error("unknown rotation label");
}

RotationLabel rotation_from_string(const std::string& s) {
  if (s == "I") return RotationLabel::I;
  if (s == "Rx90") return RotationLabel::Rx_half;
  if (s == "Ry90") return RotationLabel::Ry_half;
  throw std::invalid_argument("unknown rotation label: " + s);
}

SettingGrid SettingGrid::standard() {
  return custom(8, -0.875, 0.25, 0.0, 180.0, 61);
}

SettingGrid SettingGrid::custom(int alpha_points_per_axis, double alpha_min, double alpha_step,
                                double tau_min, double tau_max, int tau_count) {
  if (alpha_points_per_axis < 1 || tau_count < 1)
    throw std::invalid_argument("setting grid: point counts must be positive");
  SettingGrid g;
  g.rotations = {RotationLabel::I, RotationLabel::Rx_half, RotationLabel::Ry_half};
  for (int im = 0; im < alpha_points_per_axis; ++im)
    for (int re = 0; re < alpha_points_per_axis; ++re)
      g.alphas.emplace_back(alpha_min + alpha_step * re, alpha_min + alpha_step * im);
  g.taus = linspace(tau_min, tau_max, tau_count);
  return g;
}

TomographySetting SettingGrid::setting(int flat) const {
  if (flat < 0 || flat >= size()) throw std::out_of_range("setting index out of range");
  const int nt = static_cast<int>(taus.size());
  const int na = static_cast<int>(alphas.size());
  const int t = flat % nt;
  const int a = (flat / nt) % na;
  const int r = flat / (nt * na);
  return {rotations[r], alphas[a], taus[t]};
}

namespace {

Mat rotation_matrix_2x2(RotationLabel r) {
  switch (r) {
    case RotationLabel::I:
      return Mat::Identity(2, 2);
    case RotationLabel::Rx_half:
      return qubit_rotation_unitary({1.0, 0.0, 0.0}, 0.5 * std::numbers::pi);
    case RotationLabel::Ry_half:
      return qubit_rotation_unitary({0.0, 1.0, 0.0}, 0.5 * std::numbers::pi);
  }
  throw std::logic_error("unknown rotation label");
}

/// Tr[Pi_+ X] where Pi_+ projects on the excited qubit level of every
/// magnon-major pair.
double excited_population(const Mat& x) {
  double p = 0.0;
  for (int k = 1; k < x.rows(); k += 2) p += x(k, k).real();
  return p;
}

}  // namespace

ForwardModel::ForwardModel(const SystemParams& sys, const DecoherenceParams& dec,
                           SettingGrid grid, NoiseModel model, bool keep_propagators)
    : grid_(std::move(grid)), model_(model), trunc_(sys.trunc) {
  dec.validate();
  const int d = trunc_.joint_dim();
  projector_plus_ = lift_qubit(qubit_op(QubitOp::projector_plus), trunc_);

  rotations_.reserve(grid_.rotations.size());
  for (RotationLabel r : grid_.rotations)
    rotations_.push_back(lift_qubit(rotation_matrix_2x2(r), trunc_));

  displacements_.reserve(grid_.alphas.size());
  for (Complex a : grid_.alphas) displacements_.push_back(displacement_operator(a, trunc_));

  SystemParams resonant = sys;
  resonant.omega_q = resonant.omega_m;
  const Mat h = jc_hamiltonian(resonant, Frame::rotating_at_omega_m);
  const int nt = static_cast<int>(grid_.taus.size());
  effect_kernels_.resize(nt);

  if (model_ == NoiseModel::ideal) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(h);
    swap_unitaries_.resize(nt);
    for (int t = 0; t < nt; ++t) {
      Vec phases(d);
      for (int k = 0; k < d; ++k)
        phases(k) = std::exp(-kI * eig.eigenvalues()(k) * grid_.taus[t]);
      swap_unitaries_[t] =
          eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
      const Mat& u = swap_unitaries_[t];
      effect_kernels_[t] = u.adjoint() * projector_plus_ * u;
    }
  } else {
    const Superoperator l = liouvillian(h, dec, trunc_);
    if (keep_propagators) swap_propagators_.resize(nt);
    const Vec pi_vec = vectorize(projector_plus_);
    std::vector<Mat> kernels(nt);
    std::vector<Mat> props(keep_propagators ? nt : 0);
    parallel_for(nt, [&](int t) {
      Superoperator s = channel_propagator(l, grid_.taus[t]);
      kernels[t] = unvectorize(s.m.adjoint() * pi_vec, d);
      kernels[t] = 0.5 * (kernels[t] + kernels[t].adjoint().eval());
      if (keep_propagators) props[t] = std::move(s.m);
    });
    effect_kernels_ = std::move(kernels);
    swap_propagators_ = std::move(props);
  }
}

int ForwardModel::rotation_index(RotationLabel r) const {
  for (int i = 0; i < static_cast<int>(grid_.rotations.size()); ++i)
    if (grid_.rotations[i] == r) return i;
  throw std::invalid_argument("rotation label not on the grid");
}

int ForwardModel::alpha_index(Complex a) const {
  for (int i = 0; i < static_cast<int>(grid_.alphas.size()); ++i)
    if (std::abs(grid_.alphas[i] - a) < 1e-9) return i;
  throw std::invalid_argument("displacement amplitude not on the grid");
}

int ForwardModel::tau_index(double t) const {
  for (int i = 0; i < static_cast<int>(grid_.taus.size()); ++i)
    if (std::abs(grid_.taus[i] - t) < 1e-9) return i;
  throw std::invalid_argument("swap duration not on the grid");
}

Mat ForwardModel::effect(int flat_index) const {
  return effect(grid_.setting(flat_index));
}

Mat ForwardModel::effect(const TomographySetting& s) const {
  const Mat& r = rotations_[rotation_index(s.rotation)];
  const Mat& d = displacements_[alpha_index(s.alpha)];
  const Mat v = d * r;
  Mat m = v.adjoint() * effect_kernels_[tau_index(s.tau)] * v;
  return 0.5 * (m + m.adjoint().eval());
}

Eigen::VectorXd ForwardModel::exact_expectations(const DensityMatrix& rho) const {
  const int d = trunc_.joint_dim();
  if (rho.entries().rows() != d)
    throw std::invalid_argument("exact_expectations: state dimension mismatch");
  const int nr = static_cast<int>(grid_.rotations.size());
  const int na = static_cast<int>(grid_.alphas.size());
  const int nt = static_cast<int>(grid_.taus.size());
  Eigen::VectorXd out(grid_.size());

  if (model_ == NoiseModel::ideal) {
    parallel_for(nr * na, [&](int j) {
      const int r = j / na;
      const int a = j % na;
      const Mat v = displacements_[a] * rotations_[r];
      const Mat sigma = v * rho.entries() * v.adjoint();
      for (int t = 0; t < nt; ++t) {
        const Mat& u = swap_unitaries_[t];
        out(j * nt + t) = excited_population(u * sigma * u.adjoint());
      }
    });
    return out;
  }

  if (swap_propagators_.empty())
    throw std::logic_error(
        "exact_expectations: lindblad model built without keep_propagators");
  Mat prepared(d * d, nr * na);
  for (int j = 0; j < nr * na; ++j) {
    const Mat v = displacements_[j % na] * rotations_[j / na];
    prepared.col(j) = vectorize(v * rho.entries() * v.adjoint());
  }
  parallel_for(nt, [&](int t) {
    const Mat evolved = swap_propagators_[t] * prepared;
    for (int j = 0; j < nr * na; ++j)
      out(j * nt + t) = excited_population(unvectorize(evolved.col(j), d));
  });
  return out;
}

std::vector<MeasurementRecord> sample_records(const SettingGrid& grid,
                                              const Eigen::VectorXd& exact,
                                              std::optional<long long> shots,
                                              std::uint64_t seed,
                                              const ReadoutError& readout) {
  if (exact.size() != grid.size())
    throw std::invalid_argument("sample_records: expectation count does not match grid");
  if (shots && *shots <= 0)
    throw std::invalid_argument("sample_records: shot count must be positive");
  std::vector<MeasurementRecord> records;
  records.reserve(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double p = readout.apply(std::clamp(exact(i), 0.0, 1.0));
    MeasurementRecord rec;
    rec.setting = grid.setting(i);
    rec.shots = shots;
    if (shots) {
      auto rng = derive_stream(seed, static_cast<std::uint64_t>(i));
      rec.e_value = sample_binomial_fraction(rng, *shots, p);
    } else {
      rec.e_value = p;
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<MeasurementRecord> simulate_dataset(const DensityMatrix& rho,
                                                const ForwardModel& model,
                                                std::optional<long long> shots,
                                                std::uint64_t seed,
                                                const ReadoutError& readout) {
  return sample_records(model.grid(), model.exact_expectations(rho), shots, seed, readout);
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  if (rho.entries().rows() != target.amplitudes().size())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex overlap = target.amplitudes().adjoint() * rho.entries() * target.amplitudes();
  return std::sqrt(std::max(0.0, overlap.real()));
}

double purity(const DensityMatrix& rho) {
  return (rho.entries() * rho.entries()).trace().real();
}

}  // namespace magbell
