#pragma once

#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cyclab/core.hpp"
#include "cyclab/ortho_basis.hpp"

namespace cyclab {

using PlaneBasis = OrthoBasis<Complex>;

/// Polynomial in z, stored in the monomial basis or in an orthonormal basis
/// adapted to a measure. Degree is coeffs.size() - 1.
class Polynomial {
 public:
  enum class Basis { Monomial, Adapted };

  Polynomial() = default;
  static Polynomial monomial(std::vector<Complex> coeffs);
  static Polynomial adapted(std::shared_ptr<const PlaneBasis> basis, std::vector<Complex> coeffs);

  Basis basis_kind() const { return kind_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const std::shared_ptr<const PlaneBasis>& basis() const { return basis_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Complex operator()(Complex z) const;
  std::vector<Complex> evaluate(std::span<const Complex> zs) const;

  // Monomial coefficients (exact for Monomial; replayed for Adapted).
  std::vector<Complex> to_monomial() const;

 private:
  Basis kind_ = Basis::Monomial;
  std::vector<Complex> coeffs_;
  std::shared_ptr<const PlaneBasis> basis_;
};

/// Polynomial in z and conj(z): (j, m) -> coefficient of z^j conj(z)^m.
class BiPolynomial {
 public:
  BiPolynomial() = default;
  explicit BiPolynomial(std::map<std::pair<int, int>, Complex> coeffs);

  const std::map<std::pair<int, int>, Complex>& coeffs() const { return coeffs_; }
  Complex operator()(Complex z) const;

 private:
  std::map<std::pair<int, int>, Complex> coeffs_;
};

}  // namespace cyclab
