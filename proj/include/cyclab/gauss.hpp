#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "cyclab/ortho_basis.hpp"
#include "cyclab/minimax_lp.hpp"

namespace cyclab {

struct TaylorBound {
  double bound = 0.0;  // e^{-(k+1)} (k+1)^{k+1} / (k+1)!
  double cap = 0.0;    // (2 pi (k+1))^{-1/2}
};

// Log-domain evaluation; safe for large k.
TaylorBound taylor_gaussian_bound(int k);

// k-th Taylor polynomial of e^s at s, by Horner.
double taylor_exp(int k, double s);

struct RemainderCheck {
  int k = 0;
  double empirical_sup = 0.0;   // max_t e^{-t} |e^{-t} - T_k(-t)|
  double argmax = 0.0;
  double majorant_argmax = 0.0; // argmax of e^{-t} t^{k+1} / (k+1)!
  double bound = 0.0;
  double cap = 0.0;
  bool within_bound = false;    // empirical_sup <= bound + 1e-9
};

// Grid t = 0, step, 2 step, ... up to 4(k+1).
RemainderCheck verify_remainder_sup(int k, double step = 0.01);

/// Real polynomial in d variables, coefficients keyed by exponent multi-index.
struct MonoPoly {
  int dim = 1;
  std::map<MultiIndex, double> coeffs;

  static MonoPoly constant(int dim, double c);
  double operator()(std::span<const double> x) const;
  MonoPoly operator*(const MonoPoly& other) const;
  bool is_zero() const;
};

// T_k(-|x|^2) expanded over monomials in d variables.
MonoPoly taylor_in_minus_norm2(int dim, int k);

/// p(x) e^{-c|x|^2}; p is either a MonoPoly or a combination of the columns
/// of an orthonormal basis (grid fits).
struct GaussApproximant {
  int dim = 1;
  double c = 1.0;
  MonoPoly mono;
  std::shared_ptr<const OrthoBasis<double>> basis;
  std::vector<double> coeffs;

  double poly(std::span<const double> x) const;
  double operator()(std::span<const double> x) const;
};

struct ReductionStep {
  MonoPoly poly;        // p T_k(-|x|^2)
  int exponent = 0;     // n
  double gap = 0.0;     // measured sup-norm gap, in factored form
  double C = 0.0;       // sup |p| e^{-(n+1)|x|^2}
  double bound = 0.0;   // C * taylor_gaussian_bound(k).bound
  bool within_bound = false;
};

// Replaces p e^{-(n+1)|x|^2} e^{-c|x|^2} by p T_k(-|x|^2) e^{-n|x|^2} e^{-c|x|^2}.
// Requires c >= 2, so that the remainder factor is dominated by e^{-|x|^2}.
// Sup norms are taken on a cube grid of half-width sqrt(4(k+1)+4).
ReductionStep reduce_exponent_step(const MonoPoly& p, int n, int k, double c = 2.0);

struct Reduction {
  MonoPoly poly;                  // member of Pi(x) e^{-c|x|^2} after m steps
  std::vector<ReductionStep> steps;
  double total_bound = 0.0;
};
// Applies m steps, n = m-1, ..., 0, to p e^{-m|x|^2} e^{-c|x|^2}.
Reduction reduce_exponent(const MonoPoly& p, int m, int k, double c = 2.0);

/// Samples of a target on a uniform grid in R^d, row-major with the last
/// coordinate varying fastest.
struct GaussGrid {
  int dim = 1;
  double step = 1.0;
  std::vector<double> origin;
  std::vector<int> shape;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::vector<double> point(std::size_t flat) const;
  void validate() const;
};

// Cube grid [-half, half]^d with the given step, sampling f.
template <class F>
GaussGrid sample_grid(int dim, double half, double step, F&& f);

struct GaussFit {
  int degree = 0;
  double sup_error = 0.0;
  bool converged = true;
  double lower_bound = 0.0;
  std::size_t rank = 0;
  double tail_bound = 0.0;  // sup of |p| e^{-c|x|^2} on the grid boundary
  GaussApproximant approximant;
};

// min over p of max_grid |f - p e^{-c|x|^2}| at each degree in `degrees`
// (total degree), each solved as a linear program. A degree never reports a
// larger error than an earlier, smaller one in the schedule.
std::vector<GaussFit> gaussian_weighted_sup_profile(const GaussGrid& f, double c,
                                                    std::span<const int> degrees,
                                                    const MinimaxLpOptions& opt = {});
GaussFit gaussian_weighted_sup_approx(const GaussGrid& f, double c, int degree,
                                      const MinimaxLpOptions& opt = {});

template <class F>
GaussGrid sample_grid(int dim, double half, double step, F&& f) {
  GaussGrid g;
  g.dim = dim;
  g.step = step;
  const int m = static_cast<int>(std::floor(2.0 * half / step + 0.5)) + 1;
  g.origin.assign(static_cast<std::size_t>(dim), -half);
  g.shape.assign(static_cast<std::size_t>(dim), m);
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(m);
  g.values.resize(total);
  for (std::size_t k = 0; k < total; ++k) g.values[k] = f(g.point(k));
  return g;
}

}  // namespace cyclab
