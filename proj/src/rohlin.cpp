#include "cyclab/rohlin.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cyclab/cyclic.hpp"

namespace cyclab {

std::vector<Fiber> fiber_map(const DiscreteMeasure& mu, const SampledFunction& phi, double tol) {
  require_bound(phi, mu, "phi");
  std::vector<Fiber> out;
  for (auto& g : group_by_value(phi.values(), tol)) {
    Fiber f;
    f.value = g.value;
    f.atoms = std::move(g.atoms);
    for (auto i : f.atoms) f.mass += mu.weight(i);
    out.push_back(std::move(f));
  }
  return out;
}

RohlinLayers rohlin_decompose(const DiscreteMeasure& mu, const SampledFunction& phi, double tol) {
  RohlinLayers r;
  r.fibers = fiber_map(mu, phi, tol);
  r.assignment.assign(mu.size(), 0);
  r.atom_fiber.assign(mu.size(), 0);
  std::size_t depth = 0;
  for (const auto& f : r.fibers) depth = std::max(depth, f.atoms.size());
  std::vector<std::vector<Atom>> layer_atoms(depth);
  for (std::size_t fi = 0; fi < r.fibers.size(); ++fi) {
    auto order = r.fibers[fi].atoms;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (mu.weight(a) != mu.weight(b)) return mu.weight(a) > mu.weight(b);
      return a < b;
    });
    for (std::size_t k = 0; k < order.size(); ++k) {
      r.assignment[order[k]] = k + 1;
      r.atom_fiber[order[k]] = fi;
      layer_atoms[k].push_back(Atom{PlanePoint(r.fibers[fi].value), mu.weight(order[k])});
    }
  }
  for (auto& atoms : layer_atoms) r.layers.emplace_back(std::move(atoms));
  return r;
}

MultiplicityReport local_multiplicity(const DiscreteMeasure& mu, const SampledFunction& phi, double tol) {
  MultiplicityReport rep;
  for (const auto& f : fiber_map(mu, phi, tol)) {
    rep.local.push_back({f.value, f.atoms.size()});
    rep.mp = std::max(rep.mp, f.atoms.size());
  }
  return rep;
}

std::vector<SampledFunction> build_cyclic_set(const DiscreteMeasure& mu, const SampledFunction& phi,
                                              const RohlinLayers& layers) {
  require_bound(phi, mu, "phi");
  if (layers.assignment.size() != mu.size()) throw BindingError("layers were built for another measure");
  std::vector<SampledFunction> out;
  for (std::size_t n = 1; n <= layers.count(); ++n) {
    std::vector<Complex> v(mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (layers.assignment[i] == n) v[i] = std::exp(-2.0 * std::abs(phi[i]));
    out.emplace_back(std::move(v), mu);
  }
  return out;
}

CyclicSetCheck verify_cyclic_set(const DiscreteMeasure& mu, const SampledFunction& phi,
                                 const std::vector<SampledFunction>& generators, const RohlinLayers& layers,
                                 std::optional<int> degree) {
  CyclicSetCheck out;
  std::size_t widest = 1;
  for (const auto& l : layers.layers) widest = std::max(widest, l.size());
  out.degree = degree.value_or(static_cast<int>(widest) - 1);
  const GeneratorSpan span(mu, phi, generators, out.degree);
  const auto& A = span.matrix();
  const auto n = static_cast<Eigen::Index>(mu.size());
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = mu.weight(static_cast<std::size_t>(i));
  // Column i of R is the residual of the i-th atom indicator.
  const Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(n, n) - A * (A.adjoint() * w.cast<Complex>().asDiagonal());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::sqrt((w.array() * R.col(i).array().abs2()).sum() / w[i]);
    out.max_residual = std::max(out.max_residual, r);
  }
  out.exact = out.max_residual <= 1e-8;
  return out;
}

double hardest_indicator_residual(const DiscreteMeasure& mu, const std::vector<Fiber>& fibers,
                                  const std::vector<SampledFunction>& candidates) {
  for (const auto& c : candidates) require_bound(c, mu, "candidate");
  double worst = 0.0;
  const auto d = static_cast<Eigen::Index>(candidates.size());
  for (const auto& f : fibers) {
    const auto m = static_cast<Eigen::Index>(f.atoms.size());
    Eigen::VectorXd w(m);
    Eigen::MatrixXcd V(m, d);
    for (Eigen::Index a = 0; a < m; ++a) {
      w[a] = mu.weight(f.atoms[static_cast<std::size_t>(a)]);
      for (Eigen::Index g = 0; g < d; ++g) V(a, g) = candidates[static_cast<std::size_t>(g)][f.atoms[static_cast<std::size_t>(a)]];
    }
    if (d == 0) {
      for (Eigen::Index a = 0; a < m; ++a) worst = std::max(worst, std::sqrt(w[a]));
      continue;
    }
    // In the weighted inner product e_a has norm sqrt(w_a), so its residual is
    // sqrt(w_a) |P e_a| with P the projector off range(W^{1/2} V). One QR per
    // fiber gives every atom at once.
    const Eigen::MatrixXcd U = w.cwiseSqrt().cast<Complex>().asDiagonal() * V;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(U);
    qr.setThreshold(kRankTolerance);
    const Eigen::Index r = qr.rank();
    const auto Q = qr.householderQ();
    if (2 * r <= m) {
      // Few directions: 1 - |Q_r row|^2. Rows average r/m <= 1/2, so only
      // atoms that are already nearly reachable lose relative accuracy.
      const Eigen::MatrixXcd Qr = Q * Eigen::MatrixXcd::Identity(m, r);
      for (Eigen::Index a = 0; a < m; ++a)
        worst = std::max(worst, std::sqrt(w[a] * std::max(0.0, 1.0 - Qr.row(a).squaredNorm())));
    } else {
      // Many directions: read the complement directly.
      Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(m, m - r);
      E.bottomRows(m - r).setIdentity();
      const Eigen::MatrixXcd Qc = Q * E;
      for (Eigen::Index a = 0; a < m; ++a) worst = std::max(worst, std::sqrt(w[a] * Qc.row(a).squaredNorm()));
    }
  }
  return worst;
}

InsufficiencyReport generator_insufficiency_test(const DiscreteMeasure& mu, const SampledFunction& phi, int d,
                                                 int trials, std::uint64_t seed,
                                                 const std::vector<std::vector<SampledFunction>>& explicit_sets,
                                                 double tol) {
  const auto fibers = fiber_map(mu, phi, tol);
  std::size_t mp = 0;
  for (const auto& f : fibers) mp = std::max(mp, f.atoms.size());
  if (d < 0 || static_cast<std::size_t>(d) >= mp)
    throw ContractError(fmt::format("insufficiency test needs 0 <= d < mp = {}, got d = {}", mp, d));
  InsufficiencyReport rep;
  for (std::size_t fi = 0; fi < fibers.size(); ++fi) {
    const auto& f = fibers[fi];
    const auto m = f.atoms.size();
    if (m <= static_cast<std::size_t>(d)) continue;
    double wmin = mu.weight(f.atoms.front());
    for (auto i : f.atoms) wmin = std::min(wmin, mu.weight(i));
    const double b = std::sqrt(wmin * static_cast<double>(m - static_cast<std::size_t>(d)) / static_cast<double>(m));
    if (b > rep.geometry_bound) {
      rep.geometry_bound = b;
      rep.hardest_fiber = fi;
    }
  }
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<SampledFunction> cand;
    for (int g = 0; g < d; ++g) {
      std::vector<Complex> v(mu.size());
      for (auto& x : v) {
        const double re = rng.normal();
        x = Complex(re, rng.normal());
      }
      cand.emplace_back(std::move(v), mu);
    }
    rep.per_trial.push_back(hardest_indicator_residual(mu, fibers, cand));
  }
  for (const auto& set : explicit_sets) {
    if (set.size() != static_cast<std::size_t>(d)) throw ConfigError("explicit candidate set has the wrong size");
    rep.per_trial.push_back(hardest_indicator_residual(mu, fibers, set));
  }
  rep.estimate = rep.per_trial.empty() ? 0.0 : *std::min_element(rep.per_trial.begin(), rep.per_trial.end());
  const auto& hf = fibers[rep.hardest_fiber];
  rep.reason = fmt::format(
      "fiber at ({}, {}) has {} atoms but {} generators span at most a {}-dimensional subspace on it, "
      "and polynomials in phi act there as scalars",
      hf.value.real(), hf.value.imag(), hf.atoms.size(), d, d);
  return rep;
}

}  // namespace cyclab
