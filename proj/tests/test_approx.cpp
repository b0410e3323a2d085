#include <doctest.h>

#include <cmath>

#include "cyclab/approx.hpp"
#include "cyclab/generators.hpp"
#include "helpers.hpp"

using namespace cyclab;
using testing::real_atoms;

TEST_CASE("orthonormal basis by hand") {
  const auto mu = real_atoms({-1.0, 1.0}, {0.5, 0.5});
  const auto b = build_ortho_basis(mu, 1);
  REQUIRE(b->size() == 2);
  const Complex one(1.0), x0 = b->values()(0, 1), x1 = b->values()(1, 1);
  CHECK(std::abs(b->values()(0, 0) - one) < 1e-15);
  CHECK(std::abs(b->values()(1, 0) - one) < 1e-15);
  CHECK(std::abs(x0 + one) < 1e-15);
  CHECK(std::abs(x1 - one) < 1e-15);
  // Degree 2 on two atoms is dependent.
  CHECK(build_ortho_basis(mu, 2)->rank_deficient());
}

TEST_CASE("gram identity, degree 25 on 200 atoms") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto mu = testing::random_measure(rng, 200).normalized();
    const auto b = build_ortho_basis(mu, 25);
    const auto G = b->gram();
    const double err = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    CHECK(err <= 1e-10);
    CHECK(b->size() == 26);
  }
}

TEST_CASE("adapted polynomials evaluate off the atoms") {
  Rng rng(4);
  const auto mu = testing::random_measure(rng, 60).normalized();
  const auto t = SampledFunction::from(mu, [](Complex z) { return 1.0 + 2.0 * z - z * z * z; });
  const auto r = best_approx_l2(t, mu, 3);
  CHECK(r.residual <= 1e-9);
  const Complex z(0.3, -0.7);
  CHECK(std::abs(r.poly(z) - (1.0 + 2.0 * z - z * z * z)) < 1e-9);
  const auto mono = r.poly.to_monomial();
  CHECK(std::abs(mono[1] - 2.0) < 1e-8);
}

TEST_CASE("conjugate on the real axis and on the circle") {
  const auto seg = segment_nodes(0.0, 1.0, 256);
  const auto cseg = SampledFunction::from(seg, [](Complex z) { return std::conj(z); });
  for (int d : {1, 5, 12}) CHECK(best_approx_l2(cseg, seg, d).residual <= 1e-10);
  CHECK(best_approx_sup(cseg, seg, 1).residual <= 1e-9);

  const auto circ = circle_nodes(512);
  const auto cc = SampledFunction::from(circ, [](Complex z) { return std::conj(z); });
  const auto prof = density_profile(cc, circ, NormSpec::lp(2), degree_range(40));
  for (const auto& p : prof) CHECK(std::abs(p.residual - 1.0) <= 1e-6);
  for (int d : {0, 3, 10}) CHECK(best_approx_sup(cc, circ, d).residual >= 0.99);
}

TEST_CASE("p = 2 agrees with the projection, p = 1 finds the weighted median") {
  Rng rng(9);
  const auto mu = testing::random_measure(rng, 80);
  const auto t = SampledFunction::from(mu, [](Complex z) { return std::exp(std::conj(z)); });
  for (int d : {0, 2, 6}) {
    const double a = best_approx_l2(t, mu, d).residual;
    const double b = best_approx_lp(t, mu, d, 2.0).residual;
    CHECK(std::abs(a - b) <= 1e-10);
  }

  const auto m3 = real_atoms({0.0, 1.0, 10.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const SampledFunction vals({0.0, 1.0, 10.0}, m3);
  // Degree 0 forces a constant; the points are the values here, so the span
  // would interpolate at degree 2.
  const auto r = best_approx_lp(vals, m3, 0, 1.0);
  CHECK(r.residual == doctest::Approx(10.0 / 3.0).epsilon(1e-6));
  CHECK(std::abs(r.poly(Complex(0.0)) - 1.0) < 1e-4);
}

TEST_CASE("profiles never increase") {
  Rng rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    const auto mu = testing::random_measure(rng, 70);
    const auto t = SampledFunction::from(mu, [](Complex z) { return std::abs(z) + std::conj(z); });
    for (auto norm : {NormSpec::lp(0.5), NormSpec::lp(1.0), NormSpec::lp(2.0), NormSpec::lp(3.0), NormSpec::sup()}) {
      const auto prof = density_profile(t, mu, norm, degree_range(12));
      for (std::size_t k = 1; k < prof.size(); ++k) CHECK(prof[k].residual <= prof[k - 1].residual + 1e-9);
    }
  }
  CHECK(density_profile(SampledFunction::constant(circle_nodes(8), 1.0), circle_nodes(8), NormSpec::lp(2), {})
            .empty());
}

TEST_CASE("disc conjugate stays at the Bergman distance") {
  const auto disc = disc_quadrature(1.0 / 64.0, 1.0, true);
  const auto t = SampledFunction::from(disc, [](Complex z) { return std::conj(z); });
  const int degs[] = {0, 5, 15, 30};
  for (const auto& p : density_profile(t, disc, NormSpec::lp(2), degs))
    CHECK(std::abs(p.residual - std::sqrt(0.5)) <= 0.02 * std::sqrt(0.5));
  const auto raw = disc_quadrature(1.0 / 64.0, 1.0, false);
  const auto tr = SampledFunction::from(raw, [](Complex z) { return std::conj(z); });
  CHECK(std::abs(best_approx_l2(tr, raw, 10).residual - std::sqrt(M_PI / 2)) <= 0.02 * std::sqrt(M_PI / 2));
}

TEST_CASE("weights that vanish leave their atom unreachable") {
  const auto mu = real_atoms({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  const SampledFunction h({1.0, 0.0, 1.0}, mu);
  const auto e1 = SampledFunction::indicator(mu, 1);
  const auto prof = density_profile(e1, mu, NormSpec::lp(2), degree_range(4), &h);
  for (const auto& p : prof) CHECK(p.residual == doctest::Approx(1.0));
  const auto e0 = SampledFunction::indicator(mu, 0);
  CHECK(density_profile(e0, mu, NormSpec::lp(2), degree_range(2), &h).back().residual <= 1e-10);
}
