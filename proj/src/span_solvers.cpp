#include "cyclab/span_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cyclab/measure.hpp"

namespace cyclab {

namespace {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

Eigen::VectorXd to_eigen(std::span<const double> w) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) v[static_cast<Eigen::Index>(i)] = w[i];
  return v;
}

template <class S>
double residual_lp(const Vec<S>& r, const Eigen::VectorXd& w, double p) {
  double s = 0.0;
  if (p == 2.0) {
    s = (w.array() * r.array().abs2()).sum();
  } else {
    for (Eigen::Index i = 0; i < r.size(); ++i) s += w[i] * std::pow(std::abs(r[i]), p);
  }
  return p >= 1.0 ? std::pow(s, 1.0 / p) : s;
}

// min_c sum omega_i |t_i - (A c)_i|^2 on the rows with positive omega.
template <class S>
Vec<S> weighted_lsq(const Mat<S>& A, const Vec<S>& t, const Eigen::VectorXd& omega) {
  std::vector<Eigen::Index> rows;
  rows.reserve(static_cast<std::size_t>(omega.size()));
  for (Eigen::Index i = 0; i < omega.size(); ++i)
    if (omega[i] > 0.0) rows.push_back(i);
  Mat<S> B(static_cast<Eigen::Index>(rows.size()), A.cols());
  Vec<S> b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double s = std::sqrt(omega[rows[k]]);
    B.row(static_cast<Eigen::Index>(k)) = A.row(rows[k]) * S(s);
    b[static_cast<Eigen::Index>(k)] = t[rows[k]] * S(s);
  }
  // Blocked QR is several times faster than the pivoted one; fall back to a
  // rank-revealing solve only when R is close to singular.
  if (B.rows() >= B.cols()) {
    const Eigen::HouseholderQR<Mat<S>> qr(B);
    const auto d = qr.matrixQR().diagonal().cwiseAbs();
    if (d.size() == 0 || d.minCoeff() > 1e-10 * d.maxCoeff()) return qr.solve(b);
  }
  return B.completeOrthogonalDecomposition().solve(b);
}

}  // namespace

template <class S>
SpanFit<S> fit_l2(const Mat<S>& A, const Vec<S>& t, std::span<const double> w) {
  const Eigen::VectorXd wv = to_eigen(w);
  const Vec<S> ws = wv.cast<S>();
  SpanFit<S> out;
  Vec<S> c = A.adjoint() * ws.cwiseProduct(t);
  Vec<S> r = t - A * c;
  const Vec<S> c2 = A.adjoint() * ws.cwiseProduct(r);
  c += c2;
  r -= A * c2;
  out.coeffs = std::move(c);
  out.residual = std::sqrt((wv.array() * r.array().abs2()).sum());
  out.iterations = 1;
  return out;
}

template <class S>
SpanFit<S> fit_lp(const Mat<S>& A, const Vec<S>& t, std::span<const double> w, double p,
                  const Vec<S>* warm, const IrlsOptions& opt) {
  if (!(p > 0.0)) throw DomainError("IRLS needs p > 0");
  const Eigen::VectorXd wv = to_eigen(w);
  if (p == 2.0) {
    auto fit = fit_l2<S>(A, t, w);
    return fit;
  }
  Vec<S> c;
  if (warm && warm->size() == A.cols()) {
    c = *warm;
  } else {
    c = weighted_lsq<S>(A, t, wv);
  }
  Vec<S> r = t - A * c;
  double res = residual_lp<S>(r, wv, p);
  SpanFit<S> best;
  best.coeffs = c;
  best.residual = res;
  best.converged = false;
  Eigen::VectorXd omega = wv;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Eigen::VectorXd next(wv.size());
    for (Eigen::Index i = 0; i < wv.size(); ++i) {
      const double a = std::abs(r[i]);
      const double f = a > 0.0 ? std::pow(a, p - 2.0) : opt.clamp_hi;
      next[i] = wv[i] * std::clamp(f, opt.clamp_lo, opt.clamp_hi);
    }
    if (p < 1.0 && it > 0) next = 0.5 * next + 0.5 * omega;
    omega = next;
    c = weighted_lsq<S>(A, t, omega);
    r = t - A * c;
    const double nres = residual_lp<S>(r, wv, p);
    if (nres < best.residual) {
      best.coeffs = c;
      best.residual = nres;
    }
    const bool done = std::abs(nres - res) < opt.change_tol * std::max(1.0, res);
    res = nres;
    if (done) {
      best.converged = true;
      ++it;
      break;
    }
  }
  best.iterations = it;
  return best;
}

template <class S>
SpanFit<S> fit_sup(const Mat<S>& A, const Vec<S>& t, const std::vector<double>* warm_weights,
                   const LawsonOptions& opt) {
  const Eigen::Index n = A.rows();
  if (n == 0) throw ConfigError("sup fit on an empty atom set");
  Eigen::VectorXd lambda(n);
  if (warm_weights && static_cast<Eigen::Index>(warm_weights->size()) == n) {
    for (Eigen::Index i = 0; i < n; ++i) lambda[i] = (*warm_weights)[static_cast<std::size_t>(i)];
    const double s = lambda.sum();
    // Multiplicative updates never revive a zero weight, so half of the start
    // is spread uniformly; otherwise a new extremal point could never enter.
    if (!(s > 0.0)) lambda.setConstant(1.0 / static_cast<double>(n));
    else lambda = 0.5 * lambda / s + Eigen::VectorXd::Constant(n, 0.5 / static_cast<double>(n));
  } else {
    lambda.setConstant(1.0 / static_cast<double>(n));
  }

  SpanFit<S> best;
  best.residual = std::numeric_limits<double>::infinity();
  best.converged = false;
  double lower = 0.0;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const double lmax = lambda.maxCoeff();
    Eigen::VectorXd active = lambda;
    for (Eigen::Index i = 0; i < n; ++i)
      if (active[i] < opt.prune * lmax) active[i] = 0.0;
    const double asum = active.sum();
    const Vec<S> c = weighted_lsq<S>(A, t, active);
    const Vec<S> r = t - A * c;
    const Eigen::VectorXd e = r.cwiseAbs();
    const double upper = e.maxCoeff();
    lower = std::max(lower, std::sqrt((active.array() * e.array().square()).sum() / asum));
    if (upper < best.residual) {
      best.coeffs = c;
      best.residual = upper;
    }
    if (best.residual <= 0.0 || (best.residual - lower) <= opt.gap_tol * best.residual) {
      best.converged = true;
      ++it;
      break;
    }
    if (opt.accept_below >= 0.0 && best.residual < opt.accept_below) {
      ++it;
      break;
    }
    if (opt.reject_above >= 0.0 && lower >= opt.reject_above) {
      ++it;
      break;
    }
    const double norm = (lambda.array() * e.array()).sum();
    if (!(norm > 0.0)) {
      // Perfect fit on the support of lambda; keep the weights.
      ++it;
      break;
    }
    lambda = lambda.cwiseProduct(e) / norm;
  }
  best.iterations = it;
  best.lower_bound = lower;
  best.lawson_weights.assign(lambda.data(), lambda.data() + n);
  return best;
}

template SpanFit<double> fit_l2<double>(const Mat<double>&, const Vec<double>&, std::span<const double>);
template SpanFit<Complex> fit_l2<Complex>(const Mat<Complex>&, const Vec<Complex>&,
                                          std::span<const double>);
template SpanFit<double> fit_lp<double>(const Mat<double>&, const Vec<double>&, std::span<const double>,
                                        double, const Vec<double>*, const IrlsOptions&);
template SpanFit<Complex> fit_lp<Complex>(const Mat<Complex>&, const Vec<Complex>&,
                                          std::span<const double>, double, const Vec<Complex>*,
                                          const IrlsOptions&);
template SpanFit<double> fit_sup<double>(const Mat<double>&, const Vec<double>&,
                                         const std::vector<double>*, const LawsonOptions&);
template SpanFit<Complex> fit_sup<Complex>(const Mat<Complex>&, const Vec<Complex>&,
                                           const std::vector<double>*, const LawsonOptions&);

}  // namespace cyclab
