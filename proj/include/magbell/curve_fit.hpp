#pragma once

#include <utility>
#include <vector>

namespace magbell {

/// Least-squares fit of y = offset + amplitude * exp(-decay_rate t) *
/// cos(2 pi frequency t + phase). Frequency in cycles per time unit.
struct DampedCosineFit {
  double frequency = 0.0;
  double decay_rate = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  double rms_residual = 0.0;
};

/// Deterministic fit: coarse scan over (frequency, decay rate) with the
/// linear parameters solved exactly at each node, then local grid refinement.
/// Requires at least 4 samples.
DampedCosineFit fit_damped_cosine(const std::vector<std::pair<double, double>>& curve);

}  // namespace magbell
