#include "cyclab/generators.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace cyclab {

namespace {

DiscreteMeasure normalize_if(std::vector<Atom> atoms, bool normalized) {
  DiscreteMeasure mu(std::move(atoms));
  return normalized ? mu.normalized() : mu;
}

}  // namespace

DiscreteMeasure disc_quadrature(double step, double radius, bool normalized, Complex center) {
  if (!(step > 0.0) || !(radius > 0.0)) throw ConfigError("disc needs positive step and radius");
  const int k = static_cast<int>(std::ceil(radius / step));
  std::vector<Atom> atoms;
  for (int iy = -k; iy < k; ++iy)
    for (int ix = -k; ix < k; ++ix) {
      const double x = (ix + 0.5) * step, y = (iy + 0.5) * step;
      if (x * x + y * y < radius * radius) atoms.push_back({PlanePoint(center.real() + x, center.imag() + y), step * step});
    }
  if (atoms.empty()) throw ConfigError("disc step is too coarse: no cell center inside");
  return normalize_if(std::move(atoms), normalized);
}

DiscreteMeasure circle_nodes(int n, double radius, bool normalized) {
  if (n < 1 || !(radius > 0.0)) throw ConfigError("circle needs n >= 1 and a positive radius");
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    atoms.push_back({PlanePoint(radius * std::cos(t), radius * std::sin(t)),
                     normalized ? 1.0 / n : 2.0 * std::numbers::pi * radius / n});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure segment_nodes(double a, double b, int n, bool normalized) {
  if (n < 1 || !(b > a)) throw ConfigError("segment needs n >= 1 and a < b");
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k) {
    const double x = n == 1 ? 0.5 * (a + b) : a + (b - a) * k / (n - 1);
    atoms.push_back({PlanePoint(x, 0.0), normalized ? 1.0 / n : (b - a) / n});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure spiral_nodes(double t0, double t1, int n, bool normalized) {
  if (n < 1 || !(t1 > t0)) throw ConfigError("spiral needs n >= 1 and t0 < t1");
  const double dt = (t1 - t0) / n;
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k) {
    const double t = t0 + (k + 0.5) * dt;
    const Complex z = std::exp(Complex(t, t));
    atoms.push_back({PlanePoint(z), std::numbers::sqrt2 * std::exp(t) * dt});
  }
  return normalize_if(std::move(atoms), normalized);
}

DiscreteMeasure random_box(int n, double half, std::uint64_t seed) {
  if (n < 1 || !(half > 0.0)) throw ConfigError("random measure needs n >= 1 and a positive box");
  Rng rng(seed);
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k) {
    const double x = rng.uniform(-half, half);
    const double y = rng.uniform(-half, half);
    atoms.push_back({PlanePoint(x, y), 1.0 / n});
  }
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure generate_measure(const GeneratorSpec& s) {
  if (s.kind == "disc") return disc_quadrature(s.step, s.radius, s.normalized);
  if (s.kind == "circle") return circle_nodes(s.n, s.radius, s.normalized);
  if (s.kind == "segment") return segment_nodes(s.a, s.b, s.n, s.normalized);
  if (s.kind == "spiral") return spiral_nodes(s.t0, s.t1, s.n, s.normalized);
  if (s.kind == "random") return random_box(s.n, s.half, s.seed);
  throw ConfigError(fmt::format("unknown generator kind '{}'", s.kind));
}

}  // namespace cyclab
