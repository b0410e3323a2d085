#include "cyclab/cyclic.hpp"
#include "cyclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace cyclab {

SampledFunction RhoWeight::as_function() const {
  std::vector<Complex> v(values.begin(), values.end());
  return SampledFunction(std::move(v), measure_id);
}

RhoWeight build_rho(const AlphaDecomposition& decomp, const std::vector<Polynomial>& qs,
                    const DiscreteMeasure& mu) {
  if (decomp.measure_id != mu.id()) throw BindingError("decomposition was built for another measure");
  if (qs.size() != static_cast<std::size_t>(decomp.n_levels()))
    throw ConfigError(fmt::format("expected {} conjugate approximants, got {}", decomp.n_levels(), qs.size()));
  RhoWeight rho;
  rho.measure_id = mu.id();
  rho.level = decomp.first_level();
  const auto z = mu.points();
  double running = 1.0;
  for (const auto& q : qs) {
    const auto qv = q.evaluate(z);
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s = std::max(s, std::abs(qv[i]) * std::exp(-std::abs(z[i])));
    rho.q_sup.push_back(s);
    running = std::max(running, s);
    rho.M.push_back(running);
  }
  rho.values.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const int n = rho.level[i];
    rho.values[i] = n > 0 ? std::exp(-2.0 * std::abs(z[i])) / rho.M[static_cast<std::size_t>(n - 1)] : 1.0;
  }
  return rho;
}

RhoWeight build_rho_pipeline(const AlphaDecomposition& decomp, const DiscreteMeasure& mu, int degree_cap,
                             std::vector<ConjugateFit>* fits) {
  std::vector<Polynomial> qs;
  std::vector<double> deltas;
  if (fits) fits->clear();
  for (int n = 1; n <= decomp.n_levels(); ++n) {
    auto fit = approx_conjugate_on(decomp, mu, n, degree_cap);
    qs.push_back(fit.q);
    deltas.push_back(fit.delta);
    if (fits) fits->push_back(std::move(fit));
  }
  auto rho = build_rho(decomp, qs, mu);
  rho.delta = std::move(deltas);
  return rho;
}

std::vector<NamedTarget> default_targets(const DiscreteMeasure& mu, std::uint64_t seed, std::size_t indicators) {
  std::vector<NamedTarget> out;
  Rng rng(seed);
  std::vector<std::size_t> idx(mu.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t k = std::min(indicators, mu.size());
  for (std::size_t j = 0; j < k; ++j) {
    std::swap(idx[j], idx[j + rng.below(mu.size() - j)]);
    out.push_back({fmt::format("indicator[{}]", idx[j]), SampledFunction::indicator(mu, idx[j])});
  }
  out.push_back({"conj(z)", SampledFunction::from(mu, [](Complex z) { return std::conj(z); })});
  out.push_back({"|z|^2 exp(-|z|)", SampledFunction::from(mu, [](Complex z) {
                   const double r = std::abs(z);
                   return Complex(r * r * std::exp(-r));
                 })});
  return out;
}

CyclicityReport cyclicity_test(const DiscreteMeasure& mu, const SampledFunction& h, NormSpec norm,
                               const std::vector<NamedTarget>& targets, int degree_max, double tol,
                               const RhoWeight* rho, double C) {
  require_bound(h, mu, "weight");
  CyclicityReport rep;
  rep.degree_max = degree_max;
  rep.tol = tol;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (std::abs(h[i]) == 0.0) rep.zero_at_atom = true;
    if (rho && std::abs(h[i]) > C * rho->values.at(i) * (1.0 + 1e-12)) rep.bound_violated = true;
  }
  const WeightedSpan span(mu, degree_max, &h);
  const auto degrees = degree_range(degree_max);
  std::vector<std::vector<CyclicityRow>> per_target(targets.size());
  parallel_for(targets.size(), [&](std::size_t k) {
    const auto& t = targets[k];
    const double tn = lp_norm(t.f, mu, norm);
    for (const auto& pt : span.profile(t.f, norm, degrees)) {
      const double rel = tn > 0.0 ? pt.residual / tn : 0.0;
      per_target[k].push_back({t.name, pt.degree, pt.residual, rel, pt.converged});
    }
  });
  bool all = true;
  for (auto& rows : per_target) {
    const double last = rows.back().relative;
    rep.final_relative.push_back(last);
    if (!(last < tol)) all = false;
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }
  rep.cyclic = all && !rep.zero_at_atom;
  return rep;
}

std::vector<SampledFunction> graph_cyclic_transform(const std::vector<SampledFunction>& zset,
                                                    const SampledFunction& phi) {
  std::vector<SampledFunction> out;
  out.reserve(zset.size());
  for (const auto& f : zset) {
    if (f.measure_id() != phi.measure_id() || f.size() != phi.size())
      throw BindingError("generator and phi are bound to different measures");
    std::vector<Complex> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * std::exp(-std::abs(phi[i]));
    out.emplace_back(std::move(v), f.measure_id());
  }
  return out;
}

GeneratorSpan::GeneratorSpan(const DiscreteMeasure& mu, const SampledFunction& phi,
                             const std::vector<SampledFunction>& generators, int degree)
    : mu_(mu), w_(mu.weights()) {
  require_bound(phi, mu, "phi");
  const auto n = static_cast<Eigen::Index>(mu.size());
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = w_[static_cast<std::size_t>(i)];
  std::vector<Eigen::VectorXcd> cols;
  for (const auto& g : generators) {
    require_bound(g, mu, "generator");
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (std::abs(g[i]) > 0.0) live.push_back(i);
    if (live.empty()) continue;
    PlaneBasis::Mat nodes(static_cast<Eigen::Index>(live.size()), 1);
    std::vector<double> bw(live.size());
    for (std::size_t k = 0; k < live.size(); ++k) {
      nodes(static_cast<Eigen::Index>(k), 0) = phi[live[k]];
      bw[k] = w_[live[k]] * std::norm(g[live[k]]);
    }
    const PlaneBasis basis(nodes, bw, degree);
    const auto& Q = basis.values();
    for (Eigen::Index j = 0; j < Q.cols(); ++j) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
      for (std::size_t k = 0; k < live.size(); ++k)
        v[static_cast<Eigen::Index>(live[k])] = Q(static_cast<Eigen::Index>(k), j) * g[live[k]];
      cols.push_back(std::move(v));
    }
  }
  // Orthonormalize across generators (classical Gram-Schmidt, twice).
  A_.resize(n, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index m = 0;
  const Eigen::VectorXcd wc = w.cast<Complex>();
  for (auto& v : cols) {
    const double before = std::sqrt((w.array() * v.array().abs2()).sum());
    for (int pass = 0; pass < 2; ++pass) {
      if (m == 0) break;
      const Eigen::VectorXcd h = A_.leftCols(m).adjoint() * wc.cwiseProduct(v);
      v -= A_.leftCols(m) * h;
    }
    const double after = std::sqrt((w.array() * v.array().abs2()).sum());
    if (!(before > 0.0) || !(after > kRankTolerance * before)) continue;
    A_.col(m++) = v / after;
  }
  A_.conservativeResize(Eigen::NoChange, m);
}

std::vector<Complex> GeneratorSpan::fit(const SampledFunction& target, NormSpec norm, double* residual,
                                        bool* converged) const {
  require_bound(target, mu_, "target");
  const Eigen::VectorXcd t =
      Eigen::Map<const Eigen::VectorXcd>(target.values().data(), static_cast<Eigen::Index>(target.size()));
  std::vector<Complex> out(target.size(), 0.0);
  if (A_.cols() == 0) {
    if (residual) *residual = lp_norm(target, mu_, norm);
    if (converged) *converged = true;
    return out;
  }
  SpanFit<Complex> f;
  if (norm.is_sup()) f = fit_sup<Complex>(A_, t, nullptr);
  else if (norm.p() == 2.0) f = fit_l2<Complex>(A_, t, w_);
  else f = fit_lp<Complex>(A_, t, w_, norm.p());
  const Eigen::VectorXcd u = A_ * f.coeffs;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[static_cast<Eigen::Index>(i)];
  if (residual) *residual = f.residual;
  if (converged) *converged = f.converged;
  return out;
}

namespace {

double sum_pow(std::span<const Complex> r, std::span<const double> w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += w[i] * std::pow(std::abs(r[i]), p);
  return s;
}

}  // namespace

GraphReport graph_density_test(const std::vector<SampledFunction>& zset, const SampledFunction& phi,
                               const DiscreteMeasure& mu, double p, int degree_max, double tol,
                               const std::vector<NamedTarget>& targets) {
  require_bound(phi, mu, "phi");
  const auto norm = NormSpec::lp(p);
  const std::size_t n = mu.size();
  // g = (1 + |phi|^p)^{1/p}; nu = |g|^p mu.
  std::vector<Complex> gv(n);
  for (std::size_t i = 0; i < n; ++i) gv[i] = std::pow(1.0 + std::pow(std::abs(phi[i]), p), 1.0 / p);
  const SampledFunction g(gv, mu);
  const DiscreteMeasure nu = reweight_measure(mu, g, p);
  const SampledFunction phi_nu = phi.rebind(nu);
  std::vector<SampledFunction> z_nu;
  for (const auto& z : zset) {
    require_bound(z, mu, "generator");
    z_nu.push_back(z.rebind(nu));
  }
  const auto w = mu.weights();
  const auto wn = nu.weights();

  GraphReport rep;
  std::vector<double> final_rel(targets.size(), 0.0);
  for (int d = 0; d <= degree_max; ++d) {
    const GeneratorSpan span(nu, phi_nu, z_nu, d);
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      require_bound(targets[ti].f, mu, "target");
      const auto t_nu = targets[ti].f.rebind(nu);
      const auto u = span.fit(t_nu, norm);
      std::vector<Complex> r(n), rg(n), rphi(n);
      for (std::size_t i = 0; i < n; ++i) {
        r[i] = targets[ti].f[i] - u[i];
        rg[i] = r[i] * gv[i];
        rphi[i] = r[i] * phi[i];
      }
      const std::vector<Complex> zero(n, 0.0);
      GraphRow row;
      row.degree = d;
      row.target = targets[ti].name;
      row.residual_e = lp_distance(r, zero, wn, norm);
      row.residual_d = lp_distance(rg, zero, w, norm);
      const double s = sum_pow(r, w, p) + sum_pow(rphi, w, p);
      row.residual_c = p >= 1.0 ? std::pow(s, 1.0 / p) : s;
      const double tn = lp_distance(targets[ti].f.values(), zero, wn, norm);
      const double scale = std::max({row.residual_e, tn, std::numeric_limits<double>::min()});
      row.max_rel_gap = std::max({std::abs(row.residual_e - row.residual_d), std::abs(row.residual_e - row.residual_c),
                                  std::abs(row.residual_d - row.residual_c)}) / scale;
      if (row.max_rel_gap > 1e-12) rep.equal_forms = false;
      final_rel[ti] = tn > 0.0 ? row.residual_e / tn : 0.0;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.graph_cyclic = std::all_of(final_rel.begin(), final_rel.end(), [&](double r) { return r < tol; });
  return rep;
}

ComposeReport closure_compose(const SampledFunction& a, const SampledFunction& b,
                              const std::vector<SampledFunction>& a_k, const SampledFunction& c,
                              const DiscreteMeasure& mu, double p, int n_max) {
  require_bound(a, mu, "a");
  require_bound(b, mu, "b");
  require_bound(c, mu, "c");
  const auto norm = NormSpec::lp(p);
  const std::size_t n = mu.size();
  const auto w = mu.weights();
  auto supp = [&](std::span<const Complex> f) {
    double s = 0.0;
    for (auto v : f) s = std::max(s, std::abs(v));
    return p >= 1.0 ? s : std::pow(s, p);
  };
  ComposeReport rep;
  for (std::size_t k = 0; k < a_k.size(); ++k) {
    require_bound(a_k[k], mu, "a_k");
    const double dist_b = lp_distance(b, a_k[k], mu, norm);
    const double ak_sup = supp(a_k[k].values());
    // abc[n] = a b^n c, akc[n] = a a_k^n c.
    std::vector<Complex> abn(n), akn(n);
    for (std::size_t i = 0; i < n; ++i) abn[i] = akn[i] = a[i] * c[i];
    double tele = 0.0;
    for (int m = 0; m <= n_max; ++m) {
      ComposeRow row;
      row.k = k;
      row.n = m;
      if (m > 0) {
        // abn holds a b^{m-1} c here.
        const double s = supp(abn);
        if (s > 1e12 || ak_sup > 1e12) rep.hypothesis_flag = true;
        std::vector<Complex> next(n), mixed(n), nextk(n);
        for (std::size_t i = 0; i < n; ++i) {
          next[i] = abn[i] * b[i];
          mixed[i] = abn[i] * a_k[k][i];
          nextk[i] = akn[i] * a_k[k][i];
        }
        row.step_residual = lp_distance(next, mixed, w, norm);
        row.step_bound = s * dist_b;
        tele = row.step_bound + ak_sup * tele;
        abn = std::move(next);
        akn = std::move(nextk);
      }
      row.residual = lp_distance(abn, akn, w, norm);
      row.telescoped_bound = tele;
      row.step_ok = row.step_residual <= row.step_bound + 1e-9 * std::max(1.0, row.step_bound);
      row.telescoped_ok = row.residual <= tele + 1e-9 * std::max(1.0, tele);
      if (!row.step_ok || !row.telescoped_ok) rep.all_ok = false;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace cyclab
