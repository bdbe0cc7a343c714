#include "magbell/reconstruction.hpp"

#include "magbell/parallel.hpp"
#include "magbell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace magbell {

DesignMatrix::DesignMatrix(const ForwardModel& model)
    : grid_(model.grid()), trunc_(model.truncation()) {
  const int d = trunc_.joint_dim();
  const int n = grid_.size();
  a_.resize(n, d * d);
  parallel_for(n, [&](int s) { a_.row(s) = vectorize(model.effect(s)).adjoint(); });
  gram_ = a_.adjoint() * a_;
  gram_ = 0.5 * (gram_ + gram_.adjoint().eval());
  eig_.compute(gram_);
}

Eigen::VectorXd DesignMatrix::predict(const Mat& rho) const {
  return (a_ * vectorize(rho)).real();
}

Vec DesignMatrix::rhs(const Eigen::VectorXd& e) const {
  return a_.adjoint() * e.cast<Complex>();
}

Mat DesignMatrix::weighted_gram(const Eigen::VectorXd& w) const {
  Mat g = a_.adjoint() * w.cast<Complex>().asDiagonal() * a_;
  return 0.5 * (g + g.adjoint().eval());
}

Vec DesignMatrix::weighted_rhs(const Eigen::VectorXd& w, const Eigen::VectorXd& e) const {
  return a_.adjoint() * (w.array() * e.array()).matrix().cast<Complex>();
}

int DesignMatrix::rank() const {
  const auto& lam = eig_.eigenvalues();
  const double s_max = std::sqrt(std::max(0.0, lam.maxCoeff()));
  const double tol = s_max * std::max<double>(a_.rows(), a_.cols()) *
                     std::numeric_limits<double>::epsilon();
  int r = 0;
  for (int i = 0; i < lam.size(); ++i)
    if (std::sqrt(std::max(0.0, lam(i))) > tol) ++r;
  return r;
}

Eigen::VectorXd simplex_project(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::stable_sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (int j = 0; j < n; ++j) {
    cumulative += u[j];
    const double t = (cumulative - 1.0) / (j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return ((v.array() - theta).max(0.0)).matrix();
}

Mat psd_trace_one_project(const Mat& x) {
  Mat h = 0.5 * (x + x.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  const Eigen::VectorXd w = simplex_project(eig.eigenvalues());
  Mat out = eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint().eval());
}

namespace {

void check_records_match_grid(const std::vector<MeasurementRecord>& records,
                              const SettingGrid& grid) {
  if (static_cast<int>(records.size()) != grid.size())
    throw ConfigError("reconstruct: record count " + std::to_string(records.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const TomographySetting want = grid.setting(i);
    const TomographySetting& got = records[i].setting;
    if (got.rotation != want.rotation || std::abs(got.alpha - want.alpha) > 1e-9 ||
        std::abs(got.tau - want.tau) > 1e-9)
      throw ConfigError("reconstruct: record " + std::to_string(i) +
                        " does not follow the design grid order");
  }
}

double objective_value(const Vec& x, const Vec& gx, const Vec& b, double constant) {
  return (x.dot(gx)).real() - 2.0 * b.dot(x).real() + constant;
}

}  // namespace

ReconstructionResult reconstruct(const std::vector<MeasurementRecord>& records,
                                 const DesignMatrix& design, const SolverOptions& opts) {
  const int d = design.dim();
  const int dd = d * d;
  check_records_match_grid(records, design.grid());
  if (design.rank() < dd)
    throw ConfigError("reconstruct: measurement grid leaves " +
                      std::to_string(design.unidentifiable_directions()) +
                      " state-space directions unidentifiable (rank " +
                      std::to_string(design.rank()) + " < " + std::to_string(dd) + ")");

  const int n = static_cast<int>(records.size());
  Eigen::VectorXd e(n);
  for (int i = 0; i < n; ++i) e(i) = records[i].e_value;

  Mat gram;
  Vec b;
  double lambda_max = 0.0;
  double constant = 0.0;
  const Eigen::SelfAdjointEigenSolver<Mat>* eig = nullptr;
  Eigen::SelfAdjointEigenSolver<Mat> weighted_eig;
  if (opts.weighted) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
      if (!records[i].shots)
        throw ConfigError("reconstruct: variance weighting requires finite-shot records");
      const double shots = static_cast<double>(*records[i].shots);
      const double p_smooth = (e(i) * shots + 1.0) / (shots + 2.0);
      w(i) = shots / (p_smooth * (1.0 - p_smooth));
    }
    gram = design.weighted_gram(w);
    b = design.weighted_rhs(w, e);
    constant = (w.array() * e.array().square()).sum();
    weighted_eig.compute(gram);
    eig = &weighted_eig;
    lambda_max = weighted_eig.eigenvalues().maxCoeff();
  } else {
    gram = design.gram();
    b = design.rhs(e);
    constant = e.squaredNorm();
    eig = &design.gram_eig();
    lambda_max = design.lambda_max();
  }

  // Warm start: least squares restricted to well-observed directions, then
  // projected onto the feasible set.
  Vec ls = Vec::Zero(dd);
  {
    const auto& lam = eig->eigenvalues();
    const Vec coeffs = eig->eigenvectors().adjoint() * b;
    Vec scaled = Vec::Zero(dd);
    for (int i = 0; i < dd; ++i)
      if (lam(i) > lambda_max * 1e-6) scaled(i) = coeffs(i) / lam(i);
    ls = eig->eigenvectors() * scaled;
  }

  Mat x = psd_trace_one_project(unvectorize(ls, d));
  Mat x_prev = x;
  Vec xv = vectorize(x);
  Vec gx = gram * xv;
  Vec gx_prev = gx;
  double fx = objective_value(xv, gx, b, constant);

  Mat y = x;
  Vec gy = gx;
  double t = 1.0;

  ReconstructionResult result{DensityMatrix(x), 0.0, 0.0, 0.0, 0, false, 0.0, {}};
  result.objective.reserve(std::min(opts.max_iterations, 4096));

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const Vec yv = vectorize(y);
    const Vec step = yv - (gy - b) / lambda_max;
    const Mat z = psd_trace_one_project(unvectorize(step, d));
    const Vec zv = vectorize(z);
    const Vec gz = gram * zv;
    const double fz = objective_value(zv, gz, b, constant);

    Mat x_new;
    Vec gx_new;
    double fx_new;
    if (fz <= fx) {
      x_new = z;
      gx_new = gz;
      fx_new = fz;
    } else {
      x_new = x;
      gx_new = gx;
      fx_new = fx;
    }

    result.grad_map_norm = 2.0 * lambda_max * (y - z).norm();
    result.iterations = it;
    result.objective.push_back(fx_new);

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_new + (t / t_next) * (z - x_new) + ((t - 1.0) / t_next) * (x_new - x_prev);
    gy = gx_new + (t / t_next) * (gz - gx_new) + ((t - 1.0) / t_next) * (gx_new - gx_prev);

    x_prev = x;
    gx_prev = gx;
    x = x_new;
    gx = gx_new;
    fx = fx_new;
    t = t_next;

    if (result.grad_map_norm < opts.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.rho_hat = DensityMatrix(x);
  result.fidelity = fidelity(result.rho_hat, bell_state(design.truncation()));
  result.purity_qubit = purity(partial_trace_magnon(result.rho_hat, design.truncation()));
  const Eigen::VectorXd misfit = e - design.predict(x);
  result.residual = std::sqrt(misfit.squaredNorm() / n);
  return result;
}

BootstrapResult bootstrap_error(const std::vector<MeasurementRecord>& records,
                                const DesignMatrix& design, const SolverOptions& opts,
                                int resamples, std::uint64_t seed) {
  if (resamples < 1) throw ConfigError("bootstrap_error: resamples must be >= 1");
  for (const auto& r : records)
    if (!r.shots)
      throw ConfigError("bootstrap_error: exact-mode records carry no shot noise");

  const std::uint64_t n = records.size();
  BootstrapResult out;
  out.fidelities.reserve(resamples);
  std::vector<MeasurementRecord> redrawn = records;
  for (int rep = 0; rep < resamples; ++rep) {
    for (std::uint64_t i = 0; i < n; ++i) {
      auto rng = derive_stream(seed, static_cast<std::uint64_t>(rep) * n + i);
      redrawn[i].e_value =
          sample_binomial_fraction(rng, *records[i].shots, records[i].e_value);
    }
    out.fidelities.push_back(reconstruct(redrawn, design, opts).fidelity);
  }

  out.valid = resamples >= 2;
  if (out.valid) {
    double mean = 0.0;
    for (double f : out.fidelities) mean += f;
    mean /= resamples;
    double ss = 0.0;
    for (double f : out.fidelities) ss += (f - mean) * (f - mean);
    out.sigma = std::sqrt(ss / (resamples - 1));
  }
  return out;
}

}  // namespace magbell
