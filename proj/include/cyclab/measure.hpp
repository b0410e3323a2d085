#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cyclab/core.hpp"

namespace cyclab {

// A point of the plane. Coordinates are always finite.
struct PlanePoint {
  double re = 0.0;
  double im = 0.0;

  PlanePoint() = default;
  PlanePoint(double re_, double im_);
  explicit PlanePoint(Complex z) : PlanePoint(z.real(), z.imag()) {}

  Complex complex() const { return {re, im}; }
  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

// A point of R^d, used by the Gaussian-weight module.
struct RealPoint {
  std::vector<double> coords;
};

struct Atom {
  PlanePoint point;
  double weight = 0.0;
};

/// Finite measure with finitely many atoms in the plane.
///
/// Construction validates every atom (finite coordinates, finite positive
/// weight) and merges atoms at identical points by summing their weights.
/// Merged atoms keep the position of their first occurrence, so the atom
/// order is deterministic. The measure id is a content hash: two measures
/// with the same atoms in the same order share an id.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms);
  DiscreteMeasure(std::span<const Complex> points, std::span<const double> weights);

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_[i]; }

  Complex point(std::size_t i) const { return atoms_[i].point.complex(); }
  double weight(std::size_t i) const { return atoms_[i].weight; }
  std::vector<Complex> points() const;
  std::vector<double> weights() const;

  double total_mass() const { return total_; }
  std::uint64_t id() const { return id_; }

  // Same atoms, weights scaled to total mass one.
  DiscreteMeasure normalized() const;

 private:
  std::vector<Atom> atoms_;
  double total_ = 0.0;
  std::uint64_t id_ = 0;
};

/// Per-atom complex values of a measurable function, bound to one measure.
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(std::vector<Complex> values, std::uint64_t measure_id);
  SampledFunction(std::vector<Complex> values, const DiscreteMeasure& mu);

  // Evaluates f at every atom of mu.
  template <class F>
  static SampledFunction from(const DiscreteMeasure& mu, F&& f) {
    std::vector<Complex> v(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) v[i] = Complex(f(mu.point(i)));
    return SampledFunction(std::move(v), mu);
  }
  static SampledFunction constant(const DiscreteMeasure& mu, Complex c);
  static SampledFunction indicator(const DiscreteMeasure& mu, std::size_t atom);

  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }
  std::uint64_t measure_id() const { return measure_id_; }
  bool bound_to(const DiscreteMeasure& mu) const {
    return measure_id_ == mu.id() && values_.size() == mu.size();
  }

  // Pointwise arithmetic; both operands must share a binding.
  SampledFunction operator*(const SampledFunction& other) const;
  SampledFunction operator/(const SampledFunction& other) const;
  SampledFunction operator-(const SampledFunction& other) const;

  // Same values, bound to another measure with the same atom count.
  SampledFunction rebind(const DiscreteMeasure& mu) const;

 private:
  std::vector<Complex> values_;
  std::uint64_t measure_id_ = 0;
};

// Throws BindingError unless f is bound to mu.
void require_bound(const SampledFunction& f, const DiscreteMeasure& mu, const char* what);

/// Exponent of an L^p (quasi-)norm, or the sup norm over atoms.
class NormSpec {
 public:
  static NormSpec lp(double p);
  static NormSpec sup() { return NormSpec(); }

  bool is_sup() const { return !p_.has_value(); }
  double p() const;  // throws for sup

 private:
  NormSpec() = default;
  std::optional<double> p_;
};

// For p >= 1: (sum w |f-g|^p)^(1/p). For 0 < p < 1: the metric
// sum w |f-g|^p (no root). For sup: max |f-g| over atoms.
double lp_distance(const SampledFunction& f, const SampledFunction& g, const DiscreteMeasure& mu,
                   NormSpec p);
double lp_norm(const SampledFunction& f, const DiscreteMeasure& mu, NormSpec p);

// Raw form on value arrays; shared by the solvers.
double lp_distance(std::span<const Complex> f, std::span<const Complex> g,
                   std::span<const double> weights, NormSpec p);

// Measure with weights w_i |h_i|^p. The returned measure has the same atoms
// (hence, in general, a different id because weights differ).
DiscreteMeasure reweight_measure(const DiscreteMeasure& mu, const SampledFunction& h, double p);

// k(z) = z / (1 + |z|), a homeomorphism of the plane onto the open unit disc.
PlanePoint bounded_transform(PlanePoint z);
Complex bounded_transform(Complex z);
// Inverse of bounded_transform; requires |w| < 1.
PlanePoint inverse_transform(PlanePoint w);
Complex inverse_transform(Complex w);

inline constexpr double kDefaultMergeTolerance = 1e-12;

// Groups atoms by the value of phi. Values within `tol` (absolute) of a
// group's representative join that group; the representative is the value
// at the group's first atom. Groups are ordered by first occurrence and
// their atom lists are ascending.
struct ValueGroup {
  Complex value;
  std::vector<std::size_t> atoms;
};
std::vector<ValueGroup> group_by_value(std::span<const Complex> values,
                                       double tol = kDefaultMergeTolerance);

// Image measure phi(mu): one atom per distinct value of phi, carrying the
// mass of its preimage.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const SampledFunction& phi,
                            double tol = kDefaultMergeTolerance);

}  // namespace cyclab
