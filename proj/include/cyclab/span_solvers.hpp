#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cyclab/core.hpp"

namespace cyclab {

// Best approximation of a target vector t by A c, where the columns of A are
// sampled functions on n atoms. A should be well conditioned (orthonormal
// columns with respect to w, as produced from an OrthoBasis); rows of zeros
// are allowed and model atoms the span cannot reach.

template <class S>
struct SpanFit {
  Eigen::Matrix<S, Eigen::Dynamic, 1> coeffs;
  double residual = 0.0;
  bool converged = true;
  int iterations = 0;
  // Lawson only: a certified lower bound on the minimax error and the final
  // per-atom weights (usable as a warm start).
  double lower_bound = 0.0;
  std::vector<double> lawson_weights;
};

struct IrlsOptions {
  int max_iter = 200;
  double change_tol = 1e-9;
  double clamp_lo = 1e-12;
  double clamp_hi = 1e12;
};

struct LawsonOptions {
  int max_iter = 500;
  double gap_tol = 1e-6;
  double prune = 1e-14;  // relative weight below which a row leaves the solve
  // Stop early once the upper bound drops below `accept_below`, or once the
  // lower bound reaches `reject_above` (the target is then provably out of
  // reach for this span).
  double accept_below = -1.0;
  double reject_above = -1.0;
};

// Two-pass projection; A must be orthonormal in the w-inner product.
template <class S>
SpanFit<S> fit_l2(const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& A,
                  const Eigen::Matrix<S, Eigen::Dynamic, 1>& t, std::span<const double> w);

// Iteratively reweighted least squares. Residual follows lp_distance.
template <class S>
SpanFit<S> fit_lp(const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& A,
                  const Eigen::Matrix<S, Eigen::Dynamic, 1>& t, std::span<const double> w, double p,
                  const Eigen::Matrix<S, Eigen::Dynamic, 1>* warm = nullptr,
                  const IrlsOptions& opt = {});

// Lawson's iteration for min_c max_i |t_i - (A c)_i|.
template <class S>
SpanFit<S> fit_sup(const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& A,
                   const Eigen::Matrix<S, Eigen::Dynamic, 1>& t,
                   const std::vector<double>* warm_weights = nullptr, const LawsonOptions& opt = {});

}  // namespace cyclab
