#pragma once

#include <cmath>
#include <vector>

#include "cyclab/core.hpp"
#include "cyclab/measure.hpp"

namespace testing {

using cyclab::Complex;
using cyclab::DiscreteMeasure;

inline DiscreteMeasure real_atoms(std::vector<double> xs, std::vector<double> ws) {
  std::vector<Complex> z(xs.begin(), xs.end());
  return DiscreteMeasure(z, ws);
}

// n distinct atoms with random positions in [-1,1]^2 and random weights.
inline DiscreteMeasure random_measure(cyclab::Rng& rng, std::size_t n) {
  std::vector<Complex> z(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    w[i] = rng.uniform(0.1, 1.0);
  }
  return DiscreteMeasure(z, w);
}

inline double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

}  // namespace testing
