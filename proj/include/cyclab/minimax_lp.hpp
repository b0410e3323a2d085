#pragma once

#include <Eigen/Dense>

#include "cyclab/span_solvers.hpp"

namespace cyclab {

struct MinimaxLpOptions {
  int max_iter = 100;
  double gap_tol = 1e-9;  // relative primal-dual gap
};

/// min_c max_i |t_i - (A c)_i| for real data, solved as the linear program
///   min s  subject to  -s <= t_i - (A c)_i <= s
/// by a Mehrotra predictor-corrector interior point method. Each iteration
/// solves one (m+1) x (m+1) system, so it suits tall problems where Lawson's
/// linear convergence is too slow. lower_bound is the dual objective.
SpanFit<double> fit_sup_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& t, const MinimaxLpOptions& opt = {});

}  // namespace cyclab
