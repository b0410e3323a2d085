#pragma once

#include <cstdint>
#include <string>

#include "cyclab/measure.hpp"

namespace cyclab {

// Midpoint rule for area measure on the disc |z - center| < radius: one atom
// at the center of every cell of side `step` (cell edges on multiples of
// step, relative to center) whose center lies inside the disc, with weight
// step^2 (or step^2 / sum when normalized).
DiscreteMeasure disc_quadrature(double step, double radius = 1.0, bool normalized = false,
                                Complex center = 0.0);

// n nodes radius e^{2 pi i k/n}, weights arc length 2 pi radius / n (or 1/n).
DiscreteMeasure circle_nodes(int n, double radius = 1.0, bool normalized = true);

// n equally spaced nodes on [a, b], endpoints included, equal weights
// (b - a)/n (or 1/n).
DiscreteMeasure segment_nodes(double a, double b, int n, bool normalized = true);

// Nodes e^{(1+i) t} at the midpoints of n equal pieces of [t0, t1], weighted
// by arc length sqrt(2) e^t dt.
DiscreteMeasure spiral_nodes(double t0, double t1, int n, bool normalized = false);

// n atoms uniform in [-half, half]^2 with weights 1/n.
DiscreteMeasure random_box(int n, double half, std::uint64_t seed);

struct GeneratorSpec {
  std::string kind = "disc";  // disc | circle | segment | spiral | random
  double step = 1.0 / 64.0;
  double radius = 1.0;
  int n = 512;
  double a = 0.0, b = 1.0;
  double t0 = -4.0, t1 = 1.0;
  double half = 1.0;
  bool normalized = true;
  std::uint64_t seed = 1;
};

DiscreteMeasure generate_measure(const GeneratorSpec& spec);

}  // namespace cyclab
