#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cyclab/measure.hpp"
#include "cyclab/polynomial.hpp"
#include "cyclab/span_solvers.hpp"

namespace cyclab {

struct ApproxResult {
  Polynomial poly;
  double residual = 0.0;
  bool converged = true;
  int iterations = 0;
  std::size_t rank = 0;  // basis columns used
};

struct ProfilePoint {
  int degree = 0;
  double residual = 0.0;
  bool converged = true;
  std::size_t rank = 0;
};

// Orthonormal basis of span{1, z, ..., z^degree} in L^2(mu). Stops early when
// the monomials become dependent on the atoms (rank_deficient() is set).
std::shared_ptr<const PlaneBasis> build_ortho_basis(const DiscreteMeasure& mu, int degree);

/// The family {p(z) h : deg p <= degree_max} sampled on the atoms of mu.
///
/// The basis is built on the atoms where h != 0 with weights w |h|^2, so the
/// columns h q_j are orthonormal in L^2(mu). Atoms where h vanishes cannot be
/// reached and contribute |target| in full. One instance serves any number of
/// targets and norms.
class WeightedSpan {
 public:
  WeightedSpan(const DiscreteMeasure& mu, int degree_max, const SampledFunction* weight = nullptr);

  const DiscreteMeasure& measure() const { return mu_; }
  const std::shared_ptr<const PlaneBasis>& basis() const { return basis_; }
  int degree_max() const { return degree_max_; }
  std::size_t columns(int degree) const;

  ApproxResult fit(const SampledFunction& target, NormSpec norm, int degree) const;

  // Residuals over a degree schedule. Each solve is warm-started from the
  // previous one, and a previous approximant is kept when it does better, so
  // the curve is nonincreasing along nondecreasing schedules.
  std::vector<ProfilePoint> profile(const SampledFunction& target, NormSpec norm,
                                    std::span<const int> degrees,
                                    std::vector<ApproxResult>* fits = nullptr) const;

  // Values of p(z) h at the atoms for a polynomial returned by fit().
  std::vector<Complex> approximant(const ApproxResult& r) const;

  IrlsOptions irls;
  LawsonOptions lawson;

 private:
  ApproxResult solve(const Eigen::VectorXcd& t, NormSpec norm, int degree,
                     const ApproxResult* warm, const std::vector<double>* warm_lambda,
                     std::vector<double>* lambda_out) const;

  DiscreteMeasure mu_;
  int degree_max_ = 0;
  std::vector<double> weights_;
  std::vector<Complex> h_;
  std::shared_ptr<const PlaneBasis> basis_;
  Eigen::MatrixXcd A_;  // n x columns, rows of zeros where h vanishes
};

ApproxResult best_approx_l2(const SampledFunction& target, const DiscreteMeasure& mu, int degree);
ApproxResult best_approx_lp(const SampledFunction& target, const DiscreteMeasure& mu, int degree,
                            double p);
// Sup norm over the atoms of `points`; atom weights are ignored.
ApproxResult best_approx_sup(const SampledFunction& target, const DiscreteMeasure& points,
                             int degree, const LawsonOptions& opt = {});

std::vector<ProfilePoint> density_profile(const SampledFunction& target, const DiscreteMeasure& mu,
                                          NormSpec norm, std::span<const int> degrees,
                                          const SampledFunction* weight = nullptr);

// 0, 1, ..., n.
std::vector<int> degree_range(int n);

}  // namespace cyclab
