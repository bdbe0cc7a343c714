#include "magbell/curve_fit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magbell {

namespace {

struct LinearSolve {
  double offset, b_cos, b_sin, sse;
};

LinearSolve solve_linear(const std::vector<std::pair<double, double>>& curve, double freq,
                         double rate) {
  const int n = static_cast<int>(curve.size());
  Eigen::MatrixXd m(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double t = curve[i].first;
    const double env = std::exp(-rate * t);
    const double w = 2.0 * std::numbers::pi * freq * t;
    m(i, 0) = 1.0;
    m(i, 1) = env * std::cos(w);
    m(i, 2) = env * std::sin(w);
    y(i) = curve[i].second;
  }
  const Eigen::Vector3d c = (m.transpose() * m).ldlt().solve(m.transpose() * y);
  const double sse = (y - m * c).squaredNorm();
  return {c(0), c(1), c(2), sse};
}

}  // namespace

DampedCosineFit fit_damped_cosine(const std::vector<std::pair<double, double>>& curve) {
  const int n = static_cast<int>(curve.size());
  if (n < 4) throw std::invalid_argument("fit_damped_cosine: need at least 4 samples");

  double t_min = curve.front().first, t_max = curve.front().first;
  double dt_min = 0.0;
  for (int i = 1; i < n; ++i) {
    t_min = std::min(t_min, curve[i].first);
    t_max = std::max(t_max, curve[i].first);
    const double dt = std::abs(curve[i].first - curve[i - 1].first);
    if (dt > 0.0 && (dt_min == 0.0 || dt < dt_min)) dt_min = dt;
  }
  const double span = t_max - t_min;
  if (span <= 0.0 || dt_min <= 0.0)
    throw std::invalid_argument("fit_damped_cosine: degenerate time grid");

  double f_lo = 0.5 / span;            // at least half a cycle over the record
  double f_hi = 0.5 / dt_min;          // Nyquist
  double r_lo = 0.0;
  double r_hi = 4.0 / span;            // stronger decay than this is featureless

  double best_f = f_lo, best_r = r_lo, best_sse = -1.0;
  const int kFreqPoints = 481;
  const int kRatePoints = 33;
  for (int pass = 0; pass < 4; ++pass) {
    double pass_f = best_f, pass_r = best_r;
    for (int fi = 0; fi < kFreqPoints; ++fi) {
      const double f = f_lo + (f_hi - f_lo) * fi / (kFreqPoints - 1);
      for (int ri = 0; ri < kRatePoints; ++ri) {
        const double r = r_lo + (r_hi - r_lo) * ri / (kRatePoints - 1);
        const double sse = solve_linear(curve, f, r).sse;
        if (best_sse < 0.0 || sse < best_sse) {
          best_sse = sse;
          pass_f = f;
          pass_r = r;
        }
      }
    }
    best_f = pass_f;
    best_r = pass_r;
    const double f_width = (f_hi - f_lo) / (kFreqPoints - 1) * 4.0;
    const double r_width = (r_hi - r_lo) / (kRatePoints - 1) * 4.0;
    f_lo = std::max(0.0, best_f - f_width);
    f_hi = best_f + f_width;
    r_lo = std::max(0.0, best_r - r_width);
    r_hi = best_r + r_width;
  }

  const LinearSolve lin = solve_linear(curve, best_f, best_r);
  DampedCosineFit fit;
  fit.frequency = best_f;
  fit.decay_rate = best_r;
  fit.amplitude = std::hypot(lin.b_cos, lin.b_sin);
  fit.offset = lin.offset;
  fit.phase = std::atan2(-lin.b_sin, lin.b_cos);
  fit.rms_residual = std::sqrt(lin.sse / n);
  return fit;
}

}  // namespace magbell
