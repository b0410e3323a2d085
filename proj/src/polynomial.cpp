#include "cyclab/polynomial.hpp"

#include <complex>

namespace cyclab {

namespace {

Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (; n > 0; n >>= 1, z *= z)
    if (n & 1) r *= z;
  return r;
}

}  // namespace

Polynomial Polynomial::monomial(std::vector<Complex> coeffs) {
  Polynomial p;
  p.kind_ = Basis::Monomial;
  p.coeffs_ = std::move(coeffs);
  return p;
}

Polynomial Polynomial::adapted(std::shared_ptr<const PlaneBasis> basis, std::vector<Complex> coeffs) {
  if (!basis) throw ConfigError("adapted polynomial needs a basis");
  if (coeffs.size() > basis->size())
    throw ConfigError("adapted polynomial is longer than its basis");
  Polynomial p;
  p.kind_ = Basis::Adapted;
  p.coeffs_ = std::move(coeffs);
  p.basis_ = std::move(basis);
  return p;
}

Complex Polynomial::operator()(Complex z) const {
  if (coeffs_.empty()) return 0.0;
  if (kind_ == Basis::Monomial) {
    Complex acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  const auto q = basis_->evaluate(std::span<const Complex>(&z, 1));
  Complex acc = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) acc += coeffs_[j] * q[static_cast<Eigen::Index>(j)];
  return acc;
}

std::vector<Complex> Polynomial::evaluate(std::span<const Complex> zs) const {
  std::vector<Complex> out(zs.size(), 0.0);
  if (coeffs_.empty()) return out;
  if (kind_ == Basis::Monomial) {
    for (std::size_t i = 0; i < zs.size(); ++i) out[i] = (*this)(zs[i]);
    return out;
  }
  PlaneBasis::Mat pts(static_cast<Eigen::Index>(zs.size()), 1);
  for (std::size_t i = 0; i < zs.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = zs[i];
  const auto Q = basis_->evaluate_many(pts);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(coeffs_.size()));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[static_cast<Eigen::Index>(j)] = coeffs_[j];
  const Eigen::VectorXcd v = Q.leftCols(c.size()) * c;
  for (std::size_t i = 0; i < zs.size(); ++i) out[i] = v[static_cast<Eigen::Index>(i)];
  return out;
}

std::vector<Complex> Polynomial::to_monomial() const {
  if (kind_ == Basis::Monomial) return coeffs_;
  const auto expansion = basis_->monomial_expansion();
  std::vector<Complex> out(coeffs_.size(), 0.0);
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    for (const auto& [a, c] : expansion[j]) out[static_cast<std::size_t>(a[0])] += coeffs_[j] * c;
  return out;
}

BiPolynomial::BiPolynomial(std::map<std::pair<int, int>, Complex> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& [jm, c] : coeffs_)
    if (jm.first < 0 || jm.second < 0) throw ConfigError("negative exponent in BiPolynomial");
}

Complex BiPolynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  const Complex zb = std::conj(z);
  for (const auto& [jm, c] : coeffs_) acc += c * ipow(z, jm.first) * ipow(zb, jm.second);
  return acc;
}

}  // namespace cyclab
