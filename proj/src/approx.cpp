#include "cyclab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cyclab {

std::shared_ptr<const PlaneBasis> build_ortho_basis(const DiscreteMeasure& mu, int degree) {
  PlaneBasis::Mat nodes(static_cast<Eigen::Index>(mu.size()), 1);
  for (std::size_t i = 0; i < mu.size(); ++i) nodes(static_cast<Eigen::Index>(i), 0) = mu.point(i);
  const auto w = mu.weights();
  return std::make_shared<const PlaneBasis>(nodes, w, degree, mu.id());
}

WeightedSpan::WeightedSpan(const DiscreteMeasure& mu, int degree_max, const SampledFunction* weight)
    : mu_(mu), degree_max_(degree_max), weights_(mu.weights()) {
  if (degree_max < 0) throw DomainError("degree must be nonnegative");
  const std::size_t n = mu.size();
  if (weight) {
    require_bound(*weight, mu, "weight function");
    h_ = weight->values();
  } else {
    h_.assign(n, 1.0);
  }
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(h_[i]) > 0.0) live.push_back(i);
  A_.resize(static_cast<Eigen::Index>(n), 0);
  if (live.empty()) return;

  PlaneBasis::Mat nodes(static_cast<Eigen::Index>(live.size()), 1);
  std::vector<double> bw(live.size());
  for (std::size_t k = 0; k < live.size(); ++k) {
    nodes(static_cast<Eigen::Index>(k), 0) = mu.point(live[k]);
    bw[k] = weights_[live[k]] * std::norm(h_[live[k]]);
  }
  basis_ = std::make_shared<const PlaneBasis>(nodes, bw, degree_max, mu.id());
  const auto& Q = basis_->values();
  A_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), Q.cols());
  for (std::size_t k = 0; k < live.size(); ++k)
    A_.row(static_cast<Eigen::Index>(live[k])) = Q.row(static_cast<Eigen::Index>(k)) * h_[live[k]];
}

std::size_t WeightedSpan::columns(int degree) const {
  if (!basis_ || degree < 0) return 0;
  return basis_->count_up_to(std::min(degree, degree_max_));
}

ApproxResult WeightedSpan::solve(const Eigen::VectorXcd& t, NormSpec norm, int degree,
                                 const ApproxResult* warm, const std::vector<double>* warm_lambda,
                                 std::vector<double>* lambda_out) const {
  if (degree > degree_max_) throw DomainError("degree exceeds the span's degree_max");
  const std::size_t cols = columns(degree);
  ApproxResult out;
  out.rank = cols;
  if (cols == 0) {
    const std::vector<Complex> tv(t.data(), t.data() + t.size());
    const std::vector<Complex> zero(tv.size(), 0.0);
    out.residual = lp_distance(tv, zero, weights_, norm);
    out.poly = Polynomial::monomial({});
    return out;
  }
  const Eigen::MatrixXcd A = A_.leftCols(static_cast<Eigen::Index>(cols));
  SpanFit<Complex> fit;
  if (norm.is_sup()) {
    fit = fit_sup<Complex>(A, t, warm_lambda, lawson);
    if (lambda_out) *lambda_out = fit.lawson_weights;
  } else if (norm.p() == 2.0) {
    fit = fit_l2<Complex>(A, t, weights_);
  } else {
    Eigen::VectorXcd c0;
    const Eigen::VectorXcd* w0 = nullptr;
    if (warm && !warm->poly.coeffs().empty()) {
      c0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(cols));
      const auto& wc = warm->poly.coeffs();
      for (std::size_t j = 0; j < std::min(cols, wc.size()); ++j) c0[static_cast<Eigen::Index>(j)] = wc[j];
      w0 = &c0;
    }
    fit = fit_lp<Complex>(A, t, weights_, norm.p(), w0, irls);
  }
  out.residual = fit.residual;
  out.converged = fit.converged;
  out.iterations = fit.iterations;
  out.poly = Polynomial::adapted(basis_, std::vector<Complex>(fit.coeffs.data(),
                                                             fit.coeffs.data() + fit.coeffs.size()));
  return out;
}

ApproxResult WeightedSpan::fit(const SampledFunction& target, NormSpec norm, int degree) const {
  require_bound(target, mu_, "target");
  const Eigen::VectorXcd t =
      Eigen::Map<const Eigen::VectorXcd>(target.values().data(), static_cast<Eigen::Index>(target.size()));
  return solve(t, norm, degree, nullptr, nullptr, nullptr);
}

std::vector<ProfilePoint> WeightedSpan::profile(const SampledFunction& target, NormSpec norm,
                                                std::span<const int> degrees,
                                                std::vector<ApproxResult>* fits) const {
  require_bound(target, mu_, "target");
  const Eigen::VectorXcd t =
      Eigen::Map<const Eigen::VectorXcd>(target.values().data(), static_cast<Eigen::Index>(target.size()));
  std::vector<ProfilePoint> out;
  out.reserve(degrees.size());
  if (fits) fits->clear();
  std::optional<ApproxResult> prev;
  int prev_degree = -1;
  std::vector<double> lambda;
  for (int d : degrees) {
    const bool chain = prev && prev_degree <= d;
    std::vector<double> next_lambda;
    ApproxResult r = solve(t, norm, d, chain ? &*prev : nullptr,
                           chain && !lambda.empty() ? &lambda : nullptr, &next_lambda);
    if (chain && prev->residual < r.residual) {
      // The previous approximant lies in this span too.
      auto c = prev->poly.coeffs();
      const bool conv = r.converged;
      const std::size_t rank = r.rank;
      r = *prev;
      r.converged = conv;
      r.rank = rank;
      if (basis_) {
        c.resize(std::max(c.size(), rank), 0.0);
        r.poly = Polynomial::adapted(basis_, std::move(c));
      }
    }
    out.push_back(ProfilePoint{d, r.residual, r.converged, r.rank});
    if (!next_lambda.empty()) lambda = std::move(next_lambda);
    prev = r;
    prev_degree = d;
    if (fits) fits->push_back(r);
  }
  return out;
}

std::vector<Complex> WeightedSpan::approximant(const ApproxResult& r) const {
  const std::size_t cols = r.poly.coeffs().size();
  std::vector<Complex> out(mu_.size(), 0.0);
  if (cols == 0) return out;
  Eigen::VectorXcd c(static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < cols; ++j) c[static_cast<Eigen::Index>(j)] = r.poly.coeffs()[j];
  const Eigen::VectorXcd v = A_.leftCols(static_cast<Eigen::Index>(cols)) * c;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[static_cast<Eigen::Index>(i)];
  return out;
}

ApproxResult best_approx_l2(const SampledFunction& target, const DiscreteMeasure& mu, int degree) {
  return WeightedSpan(mu, degree).fit(target, NormSpec::lp(2.0), degree);
}

ApproxResult best_approx_lp(const SampledFunction& target, const DiscreteMeasure& mu, int degree,
                            double p) {
  return WeightedSpan(mu, degree).fit(target, NormSpec::lp(p), degree);
}

ApproxResult best_approx_sup(const SampledFunction& target, const DiscreteMeasure& points, int degree,
                             const LawsonOptions& opt) {
  require_bound(target, points, "target");
  // Counting weights: only the atom set matters for the sup norm.
  std::vector<Atom> atoms = points.atoms();
  for (auto& a : atoms) a.weight = 1.0 / static_cast<double>(atoms.size());
  const DiscreteMeasure counting(std::move(atoms));
  WeightedSpan span(counting, degree);
  span.lawson = opt;
  return span.fit(target.rebind(counting), NormSpec::sup(), degree);
}

std::vector<ProfilePoint> density_profile(const SampledFunction& target, const DiscreteMeasure& mu,
                                          NormSpec norm, std::span<const int> degrees,
                                          const SampledFunction* weight) {
  if (degrees.empty()) return {};
  const int dmax = *std::max_element(degrees.begin(), degrees.end());
  return WeightedSpan(mu, dmax, weight).profile(target, norm, degrees);
}

std::vector<int> degree_range(int n) {
  std::vector<int> d;
  for (int k = 0; k <= n; ++k) d.push_back(k);
  return d;
}

}  // namespace cyclab
