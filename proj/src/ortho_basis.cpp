#include "cyclab/ortho_basis.hpp"

#include <cmath>
#include <numeric>

namespace cyclab {

namespace {

int last_var(const MultiIndex& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] > 0) return i;
  return 0;
}

template <class S>
double weighted_norm(const Eigen::Matrix<S, Eigen::Dynamic, 1>& v, const Eigen::VectorXd& w) {
  return std::sqrt((w.array() * v.array().abs2()).sum());
}

}  // namespace

template <class S>
int OrthoBasis<S>::total_degree(const MultiIndex& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

template <class S>
OrthoBasis<S>::OrthoBasis(const Mat& nodes, std::span<const double> weights, int degree,
                          std::uint64_t measure_id, double tol)
    : dim_(static_cast<int>(nodes.cols())),
      degree_(degree),
      measure_id_(measure_id),
      weights_(weights.begin(), weights.end()) {
  const Eigen::Index n = nodes.rows();
  if (static_cast<std::size_t>(n) != weights.size())
    throw ConfigError("basis nodes and weights differ in length");
  if (n == 0) throw ConfigError("cannot build a basis on an empty measure");
  if (degree < 0) throw DomainError("basis degree must be nonnegative");
  if (dim_ < 1) throw ConfigError("basis nodes need at least one coordinate");

  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = weights[static_cast<std::size_t>(i)];
  const double mass = w.sum();
  q0_ = 1.0 / std::sqrt(mass);

  // Upper bound on the column count, for one allocation.
  std::size_t cap = 1;
  {
    double c = 1.0;
    for (int i = 1; i <= dim_; ++i) c = c * (degree + i) / i;
    cap = static_cast<std::size_t>(std::min<double>(c, static_cast<double>(n)));
  }
  values_.resize(n, static_cast<Eigen::Index>(cap));
  values_.col(0).setConstant(S(q0_));
  indices_.push_back(MultiIndex(dim_, 0));
  steps_.push_back(Step{});

  std::size_t level_begin = 0;
  for (int k = 1; k <= degree; ++k) {
    const std::size_t level_end = indices_.size();
    for (std::size_t parent = level_begin; parent < level_end; ++parent) {
      for (int var = last_var(indices_[parent]); var < dim_; ++var) {
        if (indices_.size() >= static_cast<std::size_t>(n)) {
          rank_deficient_ = true;
          break;
        }
        const auto m = static_cast<Eigen::Index>(indices_.size());
        Vec v = nodes.col(var).cwiseProduct(values_.col(static_cast<Eigen::Index>(parent)));
        const double before = weighted_norm<S>(v, w);
        auto Q = values_.leftCols(m);
        Vec h1 = Q.adjoint() * (w.cast<S>().cwiseProduct(v));
        v -= Q * h1;
        Vec h2 = Q.adjoint() * (w.cast<S>().cwiseProduct(v));
        v -= Q * h2;
        const double after = weighted_norm<S>(v, w);
        if (!(before > 0.0) || !(after > tol * before)) {
          rank_deficient_ = true;
          continue;
        }
        if (values_.cols() <= m) values_.conservativeResize(Eigen::NoChange, m + 1);
        values_.col(m) = v / S(after);
        Step s;
        s.parent = static_cast<int>(parent);
        s.var = var;
        s.h.resize(static_cast<std::size_t>(m));
        for (Eigen::Index j = 0; j < m; ++j) s.h[static_cast<std::size_t>(j)] = h1[j] + h2[j];
        s.norm = after;
        steps_.push_back(std::move(s));
        MultiIndex idx = indices_[parent];
        ++idx[static_cast<std::size_t>(var)];
        indices_.push_back(std::move(idx));
      }
    }
    level_begin = level_end;
    if (level_begin == indices_.size()) break;  // no column of degree k survived
  }
  values_.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(indices_.size()));
}

template <class S>
std::size_t OrthoBasis<S>::count_up_to(int d) const {
  std::size_t c = 0;
  while (c < indices_.size() && total_degree(indices_[c]) <= d) ++c;
  return c;
}

template <class S>
typename OrthoBasis<S>::Vec OrthoBasis<S>::evaluate(std::span<const S> x) const {
  if (static_cast<int>(x.size()) != dim_) throw ConfigError("evaluation point has wrong dimension");
  Vec q(static_cast<Eigen::Index>(size()));
  q[0] = S(q0_);
  for (std::size_t j = 1; j < size(); ++j) {
    const Step& s = steps_[j];
    S v = x[static_cast<std::size_t>(s.var)] * q[s.parent];
    for (std::size_t k = 0; k < j; ++k) v -= s.h[k] * q[static_cast<Eigen::Index>(k)];
    q[static_cast<Eigen::Index>(j)] = v / S(s.norm);
  }
  return q;
}

template <class S>
typename OrthoBasis<S>::Mat OrthoBasis<S>::evaluate_many(const Mat& points) const {
  if (points.cols() != dim_) throw ConfigError("evaluation points have wrong dimension");
  const Eigen::Index n = points.rows();
  Mat out(n, static_cast<Eigen::Index>(size()));
  out.col(0).setConstant(S(q0_));
  for (std::size_t j = 1; j < size(); ++j) {
    const Step& s = steps_[j];
    Vec v = points.col(s.var).cwiseProduct(out.col(s.parent));
    for (std::size_t k = 0; k < j; ++k) v -= s.h[k] * out.col(static_cast<Eigen::Index>(k));
    out.col(static_cast<Eigen::Index>(j)) = v / S(s.norm);
  }
  return out;
}

template <class S>
std::vector<std::map<MultiIndex, S>> OrthoBasis<S>::monomial_expansion() const {
  std::vector<std::map<MultiIndex, S>> out(size());
  out[0][MultiIndex(dim_, 0)] = S(q0_);
  for (std::size_t j = 1; j < size(); ++j) {
    const Step& s = steps_[j];
    std::map<MultiIndex, S> p;
    for (const auto& [a, c] : out[static_cast<std::size_t>(s.parent)]) {
      MultiIndex b = a;
      ++b[static_cast<std::size_t>(s.var)];
      p[b] += c;
    }
    for (std::size_t k = 0; k < j; ++k)
      for (const auto& [a, c] : out[k]) p[a] -= s.h[k] * c;
    for (auto& [a, c] : p) c /= S(s.norm);
    out[j] = std::move(p);
  }
  return out;
}

template <class S>
typename OrthoBasis<S>::Mat OrthoBasis<S>::gram() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights_.size()));
  for (std::size_t i = 0; i < weights_.size(); ++i) w[static_cast<Eigen::Index>(i)] = weights_[i];
  return values_.adjoint() * w.cast<S>().asDiagonal() * values_;
}

template class OrthoBasis<double>;
template class OrthoBasis<Complex>;

}  // namespace cyclab
