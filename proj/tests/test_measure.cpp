#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "cyclab/generators.hpp"
#include "cyclab/io.hpp"
#include "cyclab/measure.hpp"
#include "helpers.hpp"

using namespace cyclab;
using testing::real_atoms;

TEST_CASE("atoms are validated and duplicates merged") {
  CHECK_THROWS_AS(real_atoms({0.0}, {0.0}), ConfigError);
  CHECK_THROWS_AS(real_atoms({0.0}, {-1.0}), ConfigError);
  CHECK_THROWS_AS(real_atoms({NAN}, {1.0}), ConfigError);
  const auto mu = real_atoms({1.0, 2.0, 1.0}, {0.25, 0.5, 0.25});
  REQUIRE(mu.size() == 2);
  CHECK(mu.point(0) == Complex(1.0));
  CHECK(mu.weight(0) == doctest::Approx(0.5));
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(real_atoms({1.0, 2.0}, {0.5, 0.5}).id() == mu.id());
  CHECK(real_atoms({2.0, 1.0}, {0.5, 0.5}).id() != mu.id());
}

TEST_CASE("lp distance on two atoms") {
  const auto mu = real_atoms({0.0, 1.0}, {0.5, 0.5});
  const SampledFunction f({1.0, 1.0}, mu), g({0.0, 1.0}, mu);
  CHECK(lp_distance(f, g, mu, NormSpec::lp(2)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  for (double p : {0.5, 1.0, 2.0, 3.0}) CHECK(lp_distance(f, f, mu, NormSpec::lp(p)) == 0.0);
  CHECK(lp_distance(f, g, mu, NormSpec::sup()) == 1.0);
  // p < 1 is the metric without a root.
  CHECK(lp_distance(f, g, mu, NormSpec::lp(0.5)) == doctest::Approx(0.5));
  const auto other = real_atoms({0.0, 3.0}, {0.5, 0.5});
  CHECK_THROWS_AS(lp_distance(f, SampledFunction({0.0, 0.0}, other), mu, NormSpec::lp(2)), BindingError);
  CHECK_THROWS_AS(NormSpec::lp(0.0), DomainError);
}

TEST_CASE("reweight identity") {
  const auto mu = real_atoms({0.0, 1.0}, {0.5, 0.5});
  const SampledFunction h({1.0, 2.0}, mu);
  const auto nu = reweight_measure(mu, h, 2.0);
  CHECK(nu.weight(0) == doctest::Approx(0.5));
  CHECK(nu.weight(1) == doctest::Approx(2.0));
  CHECK(reweight_measure(mu, SampledFunction::constant(mu, 1.0), 2.0).id() == mu.id());
  CHECK_THROWS_AS(reweight_measure(mu, SampledFunction({1.0, 0.0}, mu), 2.0), ZeroWeightError);

  // ||f - g h||_{L^2(mu)} = ||f/h - g||_{L^2(|h|^2 mu)} = sqrt(1/2)
  const SampledFunction f({2.0, 2.0}, mu), g({1.0, 1.0}, mu);
  const double lhs = lp_distance(f, g * h, mu, NormSpec::lp(2));
  const double rhs = lp_distance((f / h).rebind(nu), g.rebind(nu), nu, NormSpec::lp(2));
  CHECK(lhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(rhs == doctest::Approx(lhs).epsilon(1e-15));
}

TEST_CASE("bounded transform") {
  CHECK(bounded_transform(Complex(0.0)) == Complex(0.0));
  const Complex k = bounded_transform(Complex(3.0, 4.0));
  CHECK(std::abs(k - Complex(3.0, 4.0) / 6.0) < 1e-15);
  // Far out, 1 - |k(z)| keeps only about eps / (1 + |z|) relative accuracy,
  // so the round trip is accurate to eps (1 + |z|) relative, not absolutely.
  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = 1e6 * rng.uniform(), t = 2.0 * M_PI * rng.uniform();
    const Complex z = std::polar(r, t);
    const double err = std::abs(inverse_transform(bounded_transform(z)) - z);
    worst = std::max(worst, err / ((1.0 + r) * (1.0 + r)));
  }
  CHECK(worst <= 8.0 * 2.2e-16);
  double small = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    small = std::max(small, std::abs(inverse_transform(bounded_transform(z)) - z));
  }
  CHECK(small <= 1e-12);
  CHECK_THROWS_AS(inverse_transform(Complex(1.0, 0.0)), DomainError);
}

TEST_CASE("pushforward sums fibers") {
  const auto mu = real_atoms({0.0, 1.0, 2.0, 3.0}, {0.25, 0.25, 0.25, 0.25});
  const SampledFunction phi({1.0, 1.0, 2.0, 3.0}, mu);
  const auto img = pushforward(mu, phi);
  REQUIRE(img.size() == 3);
  CHECK(img.point(0) == Complex(1.0));
  CHECK(img.weight(0) == doctest::Approx(0.5));
  CHECK(img.weight(1) == doctest::Approx(0.25));
  CHECK(img.weight(2) == doctest::Approx(0.25));

  const SampledFunction inj({5.0, 6.0, 7.0, 8.0}, mu);
  const auto same = pushforward(mu, inj);
  REQUIRE(same.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same.weight(i) == mu.weight(i));

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testing::random_measure(rng, 40);
    std::vector<Complex> v(m.size());
    for (auto& x : v) x = Complex(static_cast<double>(rng.below(6)), 0.0);
    const auto p = pushforward(m, SampledFunction(v, m));
    CHECK(std::abs(p.total_mass() - m.total_mass()) <= 1e-12 * m.total_mass());
  }
}

TEST_CASE("generators") {
  const auto coarse = disc_quadrature(0.5);
  // Centers at +-1/4, +-3/4: the 12 inside the unit disc.
  CHECK(coarse.size() == 12);
  CHECK(std::abs(coarse.total_mass() - M_PI) <= 0.25 * M_PI);

  const auto circ = circle_nodes(4);
  REQUIRE(circ.size() == 4);
  const Complex expected[] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(circ.point(i) - expected[i]) < 1e-15);
    CHECK(circ.weight(i) == doctest::Approx(0.25));
  }

  const auto seg = segment_nodes(0.0, 1.0, 3);
  REQUIRE(seg.size() == 3);
  CHECK(seg.point(1) == Complex(0.5));
  CHECK(seg.weight(0) == seg.weight(2));
  CHECK(seg.weight(0) == seg.weight(1));

  const auto a = random_box(30, 2.0, 11), b = random_box(30, 2.0, 11);
  CHECK(a.id() == b.id());
  CHECK(random_box(30, 2.0, 12).id() != a.id());

  GeneratorSpec bad;
  bad.kind = "torus";
  CHECK_THROWS_AS(generate_measure(bad), ConfigError);
  bad.kind = "disc";
  bad.step = -1.0;
  CHECK_THROWS_AS(generate_measure(bad), ConfigError);
}

TEST_CASE("measure and function files round trip") {
  const auto mu = random_box(25, 1.0, 5);
  const auto back = measure_from_json(json::parse(measure_to_json(mu).dump()));
  CHECK(back.id() == mu.id());
  const auto f = SampledFunction::from(mu, [](Complex z) { return std::exp(z); });
  const auto g = function_from_json(json::parse(function_to_json(f).dump()), mu);
  CHECK(g.values() == f.values());
  CHECK_THROWS_AS(function_from_json(json::parse(R"({"values":[{"re":1}]})"), mu), BindingError);
  CHECK_THROWS_AS(measure_from_json(json::parse(R"({"atom":[]})")), ConfigError);
}
