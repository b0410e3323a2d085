#include "cyclab/gauss.hpp"
#include "cyclab/minimax_lp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cyclab {

TaylorBound taylor_gaussian_bound(int k) {
  if (k < 0) throw DomainError("Taylor order must be nonnegative");
  const double m = static_cast<double>(k) + 1.0;
  TaylorBound b;
  b.bound = std::exp(-m + m * std::log(m) - std::lgamma(m + 1.0));
  b.cap = 1.0 / std::sqrt(2.0 * std::numbers::pi * m);
  return b;
}

double taylor_exp(int k, double s) {
  double acc = 1.0;
  for (int j = k; j >= 1; --j) acc = 1.0 + acc * s / j;
  return acc;
}

RemainderCheck verify_remainder_sup(int k, double step) {
  if (k < 0) throw DomainError("Taylor order must be nonnegative");
  if (!(step > 0.0) || step > 0.01) throw DomainError("remainder grid step must lie in (0, 0.01]");
  RemainderCheck r;
  r.k = k;
  const double m = static_cast<double>(k) + 1.0;
  const double lg = std::lgamma(m + 1.0);
  const auto count = static_cast<long>(std::ceil(4.0 * m / step));
  double best_major = -std::numeric_limits<double>::infinity();
  for (long i = 0; i <= count; ++i) {
    const double t = static_cast<double>(i) * step;
    const double et = std::exp(-t);
    const double rem = et * std::abs(et - taylor_exp(k, -t));
    if (rem > r.empirical_sup) {
      r.empirical_sup = rem;
      r.argmax = t;
    }
    if (t > 0.0) {
      const double lmaj = -t + m * std::log(t) - lg;
      if (lmaj > best_major) {
        best_major = lmaj;
        r.majorant_argmax = t;
      }
    }
  }
  const auto b = taylor_gaussian_bound(k);
  r.bound = b.bound;
  r.cap = b.cap;
  r.within_bound = r.empirical_sup <= b.bound + 1e-9;
  return r;
}

MonoPoly MonoPoly::constant(int dim, double c) {
  MonoPoly p;
  p.dim = dim;
  if (c != 0.0) p.coeffs[MultiIndex(static_cast<std::size_t>(dim), 0)] = c;
  return p;
}

double MonoPoly::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw ConfigError("polynomial evaluated at a point of wrong dimension");
  double acc = 0.0;
  for (const auto& [a, c] : coeffs) {
    double term = c;
    for (int i = 0; i < dim; ++i)
      for (int e = 0; e < a[static_cast<std::size_t>(i)]; ++e) term *= x[static_cast<std::size_t>(i)];
    acc += term;
  }
  return acc;
}

MonoPoly MonoPoly::operator*(const MonoPoly& other) const {
  if (dim != other.dim) throw ConfigError("polynomials of different dimension");
  MonoPoly out;
  out.dim = dim;
  for (const auto& [a, ca] : coeffs)
    for (const auto& [b, cb] : other.coeffs) {
      MultiIndex s = a;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
      out.coeffs[s] += ca * cb;
    }
  return out;
}

bool MonoPoly::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second == 0.0; });
}

MonoPoly taylor_in_minus_norm2(int dim, int k) {
  MonoPoly norm2;
  norm2.dim = dim;
  for (int i = 0; i < dim; ++i) {
    MultiIndex a(static_cast<std::size_t>(dim), 0);
    a[static_cast<std::size_t>(i)] = 2;
    norm2.coeffs[a] = 1.0;
  }
  MonoPoly out = MonoPoly::constant(dim, 1.0);
  MonoPoly power = MonoPoly::constant(dim, 1.0);
  double fact = 1.0;
  for (int j = 1; j <= k; ++j) {
    power = power * norm2;
    fact *= j;
    const double s = (j % 2 ? -1.0 : 1.0) / fact;
    for (const auto& [a, c] : power.coeffs) out.coeffs[a] += s * c;
  }
  return out;
}

double GaussApproximant::poly(std::span<const double> x) const {
  if (!basis) return mono(x);
  const auto q = basis->evaluate(x);
  double acc = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * q[static_cast<Eigen::Index>(j)];
  return acc;
}

double GaussApproximant::operator()(std::span<const double> x) const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return poly(x) * std::exp(-c * r2);
}

namespace {

// Visits every point of the cube grid [-half, half]^dim with `per_axis`
// points per axis.
template <class F>
void for_each_cube_point(int dim, double half, int per_axis, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  const double h = 2.0 * half / (per_axis - 1);
  while (true) {
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = -half + h * idx[static_cast<std::size_t>(i)];
    f(std::span<const double>(x));
    int i = dim - 1;
    while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
}

}  // namespace

ReductionStep reduce_exponent_step(const MonoPoly& p, int n, int k, double c) {
  if (n < 0 || k < 0) throw DomainError("exponent and Taylor order must be nonnegative");
  if (c < 2.0) throw DomainError("reduce_exponent_step needs c >= 2");
  ReductionStep s;
  s.exponent = n;
  s.poly = p * taylor_in_minus_norm2(p.dim, k);
  const double B = taylor_gaussian_bound(k).bound;
  if (p.is_zero()) {
    s.poly = MonoPoly::constant(p.dim, 0.0);
    s.within_bound = true;
    return s;
  }
  const double half = std::sqrt(4.0 * (k + 1) + 4.0);
  const int per_axis = p.dim == 1 ? 8001 : p.dim == 2 ? 401 : 61;
  for_each_cube_point(p.dim, half, per_axis, [&](std::span<const double> x) {
    double t = 0.0;
    for (double v : x) t += v * v;
    const double pv = std::abs(p(x));
    s.C = std::max(s.C, pv * std::exp(-(n + 1) * t));
    const double rem = std::abs(std::exp(-t) - taylor_exp(k, -t));
    s.gap = std::max(s.gap, pv * std::exp(-n * t - c * t) * rem);
  });
  s.bound = s.C * B;
  s.within_bound = s.gap <= s.bound * (1.0 + 1e-12) + 1e-300;
  return s;
}

Reduction reduce_exponent(const MonoPoly& p, int m, int k, double c) {
  Reduction r;
  r.poly = p;
  for (int n = m - 1; n >= 0; --n) {
    auto step = reduce_exponent_step(r.poly, n, k, c);
    r.total_bound += step.bound;
    r.poly = step.poly;
    r.steps.push_back(std::move(step));
  }
  return r;
}

std::vector<double> GaussGrid::point(std::size_t flat) const {
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    const auto m = static_cast<std::size_t>(shape[static_cast<std::size_t>(i)]);
    x[static_cast<std::size_t>(i)] = origin[static_cast<std::size_t>(i)] + step * static_cast<double>(flat % m);
    flat /= m;
  }
  return x;
}

void GaussGrid::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be positive");
  if (origin.size() != static_cast<std::size_t>(dim)) throw ConfigError("grid origin has wrong length");
  if (shape.size() != static_cast<std::size_t>(dim)) throw ConfigError("grid shape has wrong length");
  std::size_t total = 1;
  for (int m : shape) {
    if (m < 1) throw ConfigError("grid shape entries must be positive");
    total *= static_cast<std::size_t>(m);
  }
  if (total != values.size()) throw ConfigError("grid values do not match its shape");
  for (double v : values)
    if (!std::isfinite(v)) throw ConfigError("grid values must be finite");
}

std::vector<GaussFit> gaussian_weighted_sup_profile(const GaussGrid& f, double c,
                                                    std::span<const int> degrees,
                                                    const MinimaxLpOptions& opt) {
  f.validate();
  if (!(c > 0.0)) throw DomainError("Gaussian rate c must be positive");
  if (degrees.empty()) return {};
  const int dmax = *std::max_element(degrees.begin(), degrees.end());
  const auto n = static_cast<Eigen::Index>(f.size());
  Eigen::MatrixXd X(n, f.dim);
  Eigen::VectorXd g(n);
  std::vector<bool> boundary(f.size(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto x = f.point(static_cast<std::size_t>(i));
    double r2 = 0.0;
    for (int j = 0; j < f.dim; ++j) {
      X(i, j) = x[static_cast<std::size_t>(j)];
      r2 += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    }
    g[i] = std::exp(-c * r2);
    std::size_t flat = static_cast<std::size_t>(i);
    for (int j = f.dim - 1; j >= 0; --j) {
      const auto m = static_cast<std::size_t>(f.shape[static_cast<std::size_t>(j)]);
      const std::size_t q = flat % m;
      if (q == 0 || q + 1 == m) boundary[static_cast<std::size_t>(i)] = true;
      flat /= m;
    }
  }
  // Columns g q_j with q_j orthonormal for the weights g^2: the problem is
  // a plain sup fit of f by a well conditioned family.
  std::vector<double> w(static_cast<std::size_t>(n));
  double ws = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ws += g[i] * g[i];
  for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = g[i] * g[i] / ws;
  auto basis = std::make_shared<const OrthoBasis<double>>(X, w, dmax);
  const Eigen::MatrixXd A = g.asDiagonal() * basis->values();
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(f.values.data(), n);

  std::vector<GaussFit> out;
  Eigen::VectorXd prev_c;
  double prev_err = std::numeric_limits<double>::infinity();
  int prev_degree = -1;
  for (int d : degrees) {
    const auto cols = static_cast<Eigen::Index>(basis->count_up_to(d));
    const bool chain = prev_degree >= 0 && prev_degree <= d;
    auto fit = fit_sup_lp(A.leftCols(cols), t, opt);
    Eigen::VectorXd coeffs = fit.coeffs;
    double err = fit.residual;
    if (chain && prev_err < err) {
      coeffs = Eigen::VectorXd::Zero(cols);
      coeffs.head(prev_c.size()) = prev_c;
      err = prev_err;
    }
    GaussFit gf;
    gf.degree = d;
    gf.sup_error = err;
    gf.converged = fit.converged;
    gf.lower_bound = fit.lower_bound;
    gf.rank = static_cast<std::size_t>(cols);
    gf.approximant.dim = f.dim;
    gf.approximant.c = c;
    gf.approximant.basis = basis;
    gf.approximant.coeffs.assign(coeffs.data(), coeffs.data() + coeffs.size());
    const Eigen::VectorXd approx = A.leftCols(cols) * coeffs;
    for (Eigen::Index i = 0; i < n; ++i)
      if (boundary[static_cast<std::size_t>(i)]) gf.tail_bound = std::max(gf.tail_bound, std::abs(approx[i]));
    out.push_back(std::move(gf));
    prev_c = coeffs;
    prev_err = err;
    prev_degree = d;
  }
  return out;
}

GaussFit gaussian_weighted_sup_approx(const GaussGrid& f, double c, int degree, const MinimaxLpOptions& opt) {
  const int d[] = {degree};
  return gaussian_weighted_sup_profile(f, c, d, opt).front();
}

}  // namespace cyclab
