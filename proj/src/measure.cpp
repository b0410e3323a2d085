#include "cyclab/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

namespace cyclab {

namespace {

struct PointHash {
  std::size_t operator()(const PlanePoint& p) const {
    // +0.0 and -0.0 compare equal, so hash them alike.
    const double re = p.re == 0.0 ? 0.0 : p.re;
    const double im = p.im == 0.0 ? 0.0 : p.im;
    std::uint64_t h = std::bit_cast<std::uint64_t>(re);
    h ^= std::bit_cast<std::uint64_t>(im) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

PlanePoint::PlanePoint(double re_, double im_) : re(re_), im(im_) {
  if (!std::isfinite(re) || !std::isfinite(im))
    throw ConfigError("plane point coordinates must be finite");
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  std::unordered_map<PlanePoint, std::size_t, PointHash> index;
  atoms_.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!std::isfinite(a.point.re) || !std::isfinite(a.point.im))
      throw ConfigError("atom coordinates must be finite");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw ConfigError(fmt::format("atom weight must be finite and positive, got {}", a.weight));
    auto [it, inserted] = index.try_emplace(a.point, atoms_.size());
    if (inserted)
      atoms_.push_back(a);
    else
      atoms_[it->second].weight += a.weight;
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& a : atoms_) {
    total_ += a.weight;
    h = fnv1a(h, std::bit_cast<std::uint64_t>(a.point.re));
    h = fnv1a(h, std::bit_cast<std::uint64_t>(a.point.im));
    h = fnv1a(h, std::bit_cast<std::uint64_t>(a.weight));
  }
  id_ = fnv1a(h, atoms_.size());
}

DiscreteMeasure::DiscreteMeasure(std::span<const Complex> points, std::span<const double> weights)
    : DiscreteMeasure([&] {
        if (points.size() != weights.size())
          throw ConfigError("points and weights differ in length");
        std::vector<Atom> atoms(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
          atoms[i] = Atom{PlanePoint(points[i]), weights[i]};
        return atoms;
      }()) {}

std::vector<Complex> DiscreteMeasure::points() const {
  std::vector<Complex> out(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) out[i] = atoms_[i].point.complex();
  return out;
}

std::vector<double> DiscreteMeasure::weights() const {
  std::vector<double> out(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) out[i] = atoms_[i].weight;
  return out;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  std::vector<Atom> scaled = atoms_;
  for (auto& a : scaled) a.weight /= total_;
  return DiscreteMeasure(std::move(scaled));
}

SampledFunction::SampledFunction(std::vector<Complex> values, std::uint64_t measure_id)
    : values_(std::move(values)), measure_id_(measure_id) {}

SampledFunction::SampledFunction(std::vector<Complex> values, const DiscreteMeasure& mu)
    : values_(std::move(values)), measure_id_(mu.id()) {
  if (values_.size() != mu.size())
    throw BindingError(fmt::format("function has {} values but the measure has {} atoms",
                                   values_.size(), mu.size()));
}

SampledFunction SampledFunction::constant(const DiscreteMeasure& mu, Complex c) {
  return SampledFunction(std::vector<Complex>(mu.size(), c), mu);
}

SampledFunction SampledFunction::indicator(const DiscreteMeasure& mu, std::size_t atom) {
  std::vector<Complex> v(mu.size(), 0.0);
  v.at(atom) = 1.0;
  return SampledFunction(std::move(v), mu);
}

namespace {

void require_same_binding(const SampledFunction& a, const SampledFunction& b) {
  if (a.measure_id() != b.measure_id() || a.size() != b.size())
    throw BindingError("functions are bound to different measures");
}

}  // namespace

SampledFunction SampledFunction::operator*(const SampledFunction& other) const {
  require_same_binding(*this, other);
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * other.values_[i];
  return SampledFunction(std::move(v), measure_id_);
}

SampledFunction SampledFunction::operator/(const SampledFunction& other) const {
  require_same_binding(*this, other);
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] / other.values_[i];
  return SampledFunction(std::move(v), measure_id_);
}

SampledFunction SampledFunction::operator-(const SampledFunction& other) const {
  require_same_binding(*this, other);
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - other.values_[i];
  return SampledFunction(std::move(v), measure_id_);
}

SampledFunction SampledFunction::rebind(const DiscreteMeasure& mu) const {
  return SampledFunction(values_, mu);
}

void require_bound(const SampledFunction& f, const DiscreteMeasure& mu, const char* what) {
  if (!f.bound_to(mu))
    throw BindingError(fmt::format("{} is not bound to the given measure", what));
}

NormSpec NormSpec::lp(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("norm exponent must be positive");
  NormSpec n;
  n.p_ = p;
  return n;
}

double NormSpec::p() const {
  if (!p_) throw DomainError("sup norm has no finite exponent");
  return *p_;
}

double lp_distance(std::span<const Complex> f, std::span<const Complex> g,
                   std::span<const double> weights, NormSpec p) {
  if (f.size() != g.size() || f.size() != weights.size())
    throw BindingError("lp_distance operands differ in length");
  if (p.is_sup()) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
    return m;
  }
  const double e = p.p();
  double s = 0.0;
  if (e == 2.0) {
    for (std::size_t i = 0; i < f.size(); ++i) s += weights[i] * std::norm(f[i] - g[i]);
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) s += weights[i] * std::pow(std::abs(f[i] - g[i]), e);
  }
  return e >= 1.0 ? std::pow(s, 1.0 / e) : s;
}

double lp_distance(const SampledFunction& f, const SampledFunction& g, const DiscreteMeasure& mu,
                   NormSpec p) {
  require_bound(f, mu, "first operand");
  require_bound(g, mu, "second operand");
  const auto w = mu.weights();
  return lp_distance(f.values(), g.values(), w, p);
}

double lp_norm(const SampledFunction& f, const DiscreteMeasure& mu, NormSpec p) {
  return lp_distance(f, SampledFunction::constant(mu, 0.0), mu, p);
}

DiscreteMeasure reweight_measure(const DiscreteMeasure& mu, const SampledFunction& h, double p) {
  require_bound(h, mu, "reweighting function");
  if (!(p > 0.0)) throw DomainError("reweight exponent must be positive");
  std::vector<Atom> atoms = mu.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double m = std::abs(h[i]);
    if (m == 0.0)
      throw ZeroWeightError(fmt::format("reweighting function vanishes at atom {}", i));
    atoms[i].weight *= p == 2.0 ? m * m : std::pow(m, p);
  }
  return DiscreteMeasure(std::move(atoms));
}

Complex bounded_transform(Complex z) { return z / (1.0 + std::abs(z)); }

PlanePoint bounded_transform(PlanePoint z) { return PlanePoint(bounded_transform(z.complex())); }

Complex inverse_transform(Complex w) {
  const double r = std::abs(w);
  if (!(r < 1.0)) throw DomainError("inverse bounded transform needs |w| < 1");
  return w / (1.0 - r);
}

PlanePoint inverse_transform(PlanePoint w) { return PlanePoint(inverse_transform(w.complex())); }

std::vector<ValueGroup> group_by_value(std::span<const Complex> values, double tol) {
  std::vector<ValueGroup> groups;
  // Representatives keyed by real part; a query scans the window
  // [re - tol, re + tol].
  std::multimap<double, std::size_t> by_re;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Complex v = values[i];
    std::size_t found = groups.size();
    for (auto it = by_re.lower_bound(v.real() - tol);
         it != by_re.end() && it->first <= v.real() + tol; ++it) {
      if (std::abs(groups[it->second].value - v) <= tol) {
        found = std::min(found, it->second);
      }
    }
    if (found == groups.size()) {
      by_re.emplace(v.real(), groups.size());
      groups.push_back(ValueGroup{v, {i}});
    } else {
      groups[found].atoms.push_back(i);
    }
  }
  return groups;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const SampledFunction& phi, double tol) {
  require_bound(phi, mu, "pushforward map");
  const auto groups = group_by_value(phi.values(), tol);
  std::vector<Atom> atoms;
  atoms.reserve(groups.size());
  for (const auto& g : groups) {
    double w = 0.0;
    for (auto i : g.atoms) w += mu.weight(i);
    atoms.push_back(Atom{PlanePoint(g.value), w});
  }
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace cyclab
