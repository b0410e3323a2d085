#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cyclab/core.hpp"

namespace cyclab {

using MultiIndex = std::vector<int>;

inline constexpr double kRankTolerance = 1e-12;

/// Orthonormal polynomials with respect to a discrete measure.
///
/// Columns are generated in graded order: every new column is x_i times an
/// earlier column, orthogonalized twice (classical Gram-Schmidt with one
/// reorthogonalization) against all columns so far. In one variable this is
/// the Arnoldi process on diag(z). A candidate whose orthogonalized norm falls
/// below tol times its norm before projection is dropped and the basis is
/// flagged rank deficient.
///
/// The recurrence coefficients are kept, so the columns can be evaluated at
/// points other than the nodes. S is double for real nodes and Complex for
/// points of the plane.
template <class S>
class OrthoBasis {
 public:
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

  // nodes is n x d; weights has n positive entries.
  OrthoBasis(const Mat& nodes, std::span<const double> weights, int degree,
             std::uint64_t measure_id = 0, double tol = kRankTolerance);

  int dim() const { return dim_; }
  int requested_degree() const { return degree_; }
  int achieved_degree() const { return indices_.empty() ? -1 : total_degree(indices_.back()); }
  std::size_t size() const { return indices_.size(); }
  bool rank_deficient() const { return rank_deficient_; }
  std::uint64_t measure_id() const { return measure_id_; }

  // n x size(); column j holds q_j at the nodes.
  const Mat& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  // Number of leading columns of total degree <= d.
  std::size_t count_up_to(int d) const;

  // q_0(x), ..., q_{size-1}(x) at one point (x has dim() entries).
  Vec evaluate(std::span<const S> x) const;
  // Rows are points.
  Mat evaluate_many(const Mat& points) const;

  // Monomial coefficients of every column, replayed from the recurrence.
  // Unstable at high degree; intended for inspection and small cases.
  std::vector<std::map<MultiIndex, S>> monomial_expansion() const;

  // Q^H W Q.
  Mat gram() const;

  static int total_degree(const MultiIndex& a);

 private:
  struct Step {
    int parent = -1;
    int var = 0;
    std::vector<S> h;  // projections onto columns 0..j-1
    double norm = 1.0;
  };

  int dim_ = 1;
  int degree_ = 0;
  std::uint64_t measure_id_ = 0;
  bool rank_deficient_ = false;
  double q0_ = 1.0;
  std::vector<double> weights_;
  std::vector<MultiIndex> indices_;
  std::vector<Step> steps_;
  Mat values_;
};

extern template class OrthoBasis<double>;
extern template class OrthoBasis<Complex>;

}  // namespace cyclab
